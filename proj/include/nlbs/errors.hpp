#pragma once

#include <stdexcept>
#include <string>

namespace nlbs {

/// Invalid parameters or config values. Carries the offending key when known.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what, std::string key = {})
        : std::invalid_argument(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// The adaptive Psi integrator could not make progress.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Nonlinear solve failed even after step halving.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nlbs
