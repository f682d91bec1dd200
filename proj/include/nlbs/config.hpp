#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nlbs/stepper.hpp"

namespace nlbs {

/// Everything a CLI run needs, read from a flat `key = value` file.
struct RunConfig {
    Problem problem{};
    std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
    double A_max = 50.0;
    /// Log-spaced Psi samples per sign.
    std::size_t psi_n = 500;
    double psi_tol = 1e-9;
    /// Max-norm tolerance of the linear-limit oracle comparison in verify.
    double oracle_tol = 2e-2;
    std::filesystem::path out_dir = "out";
};

/// Recognized keys, in the order used by to_config_text.
const std::vector<std::string_view>& config_keys();

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
/// Throws ValidationError naming the key for unknown or repeated keys,
/// malformed values, and values that fail validation.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file. Throws ValidationError if it cannot be opened.
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const RunConfig& config);

/// All module preconditions that can be checked before computing.
void validate(const RunConfig& config);

}  // namespace nlbs
