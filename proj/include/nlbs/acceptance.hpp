#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlbs/config.hpp"

namespace nlbs {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    bool all_pass() const;
};

struct AcceptanceOptions {
    /// Market, domain and nonlinear benchmark; criterion-specific overrides
    /// (a = 0, eps = 1e-3, nx = 801, nt = 500 for the linear limit) are applied on top.
    RunConfig config{};
    int threads = 1;
    /// Criterion ids to run; empty runs 1..7.
    std::vector<int> only;
};

/// `[PASS] 3 linear_oracle (1.20 s): ...`
std::string verdict_line(const CriterionResult& result);

/// Runs the acceptance criteria in order. When `log` is set each verdict line
/// is written as soon as its criterion finishes.
AcceptanceReport run_acceptance(const AcceptanceOptions& options, std::ostream* log = nullptr);

}  // namespace nlbs
