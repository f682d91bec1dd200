#pragma once

#include <iosfwd>

#include "nlbs/config.hpp"

namespace nlbs {

enum ExitCode : int {
    exit_success = 0,
    exit_validation = 2,
    exit_solver = 3,
    exit_acceptance = 4,
};

struct RunContext {
    RunConfig config{};
    int threads = 1;
    std::ostream* log = nullptr;
};

/// psi.csv over [-A_max, A_max] (psi_n log-spaced points per sign and A = 0)
/// and psi_certify.csv. Returns exit_acceptance if a check fails.
int run_psi(const RunContext& ctx);

/// snapshots, diagnostics, monotonicity, norms, price and residual CSVs for
/// one solve. Snapshot and price files honour dt_out.
int run_solve(const RunContext& ctx);

/// sweep, exponents and cauchy CSVs. Returns exit_acceptance unless every
/// exponent check passes.
int run_sweep(const RunContext& ctx);

/// Acceptance criteria 1..7 with one verdict line each on ctx.log.
int run_verify(const RunContext& ctx);

/// Maps ValidationError to exit_validation and SolverFailure or
/// IntegrationError to exit_solver, printing the message to `err`.
int guarded(int (*run)(const RunContext&), const RunContext& ctx, std::ostream& err);

}  // namespace nlbs
