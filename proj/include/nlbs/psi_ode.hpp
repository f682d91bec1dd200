#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nlbs {

/// Right-hand side of the transaction-cost volatility ODE
///   Psi'(A) = (Psi + 1) / (2 sqrt(A Psi) - A),   A != 0.
/// On the negative branch A and Psi are both nonpositive, so sqrt(A Psi) is
/// taken as sqrt(|A| |Psi|).
double psi_rhs(double A, double psi);

/// Leading-order behaviour near the singular point, sign(A) (3/2)^(2/3) |A|^(1/3).
double psi_seed(double A);

/// psi_seed with its first correction, c A^(1/3) + c k |A|^(2/3). Start value
/// of the integration and the table value for |A| below the seed radius.
double psi_local(double A);

struct PsiOptions {
    double seed_radius = 1e-8;
    /// Local error tolerance of the embedded integrator (relative and absolute).
    double tol = 1e-9;
    /// Largest step in log|A|; bounds the node spacing of the cached table.
    double max_log_step = 0.01;
};

/// Cached solution of the Psi ODE on [-a_max, a_max].
///
/// Nodes are the accepted steps of a Dormand-Prince 5(4) integration in the
/// variable log|A|, started at +/-seed_radius from psi_local. Between nodes the
/// table uses a cubic Hermite interpolant whose slopes are the ODE right-hand
/// side, limited Fritsch-Carlson style so the interpolant stays monotone.
/// Immutable after construction.
class PsiTable {
public:
    /// Throws ValidationError for a_max <= seed_radius or tol <= 0, and
    /// IntegrationError if the step controller underflows.
    static PsiTable build(double a_max, const PsiOptions& options = {});

    /// Throws std::domain_error for |A| > a_max().
    double operator()(double A) const;

    double a_max() const noexcept { return a_max_; }
    double seed_radius() const noexcept { return seed_radius_; }
    double tol() const noexcept { return tol_; }

    /// Nodes ordered by increasing A, including the seed points and A = 0.
    std::span<const double> nodes() const noexcept { return a_; }
    std::span<const double> values() const noexcept { return psi_; }

    std::size_t rhs_evaluations() const noexcept { return rhs_evals_; }

private:
    PsiTable() = default;

    std::vector<double> a_;
    std::vector<double> psi_;
    std::vector<double> slope_;
    double a_max_ = 0.0;
    double seed_radius_ = 0.0;
    double tol_ = 0.0;
    std::size_t rhs_evals_ = 0;
};

/// Psi(A) with local tolerance tol. Builds a table reaching |A|.
double psi_eval(double A, double tol);

struct LemmaCheck {
    std::string name;
    bool pass = false;
    /// Smallest slack over all probes; negative means violated.
    double worst_margin = 0.0;
    double worst_at = 0.0;
};

struct PsiCertificate {
    std::vector<LemmaCheck> checks;
    bool all_pass() const;
};

struct PsiCertifyOptions {
    /// Smallest |A| of the log-spaced probe grid.
    double a_min = 1e-6;
    /// Probe point for the asymptotic limits Psi(A)/A -> 1 and Psi(A) -> -1.
    double a_far = 1e4;
    double linear_slope = 1.1;
    double linear_offset = 2.62;
    PsiOptions integrator{};
};

/// Checks on n log-spaced probes per sign in [a_min, a_max]:
///   asymptotics  |Psi(a_far)/a_far - 1| <= 0.05 and Psi(-a_far) in (-1, -0.95]
///   sign         Psi(0) = 0, Psi >= 0 for A >= 0, -1 < Psi <= 0 for A <= 0
///   monotone     Psi nondecreasing along the sorted probes
///   linear bound Psi(A) <= 1.1 A + 2.62 for A >= 0
/// Throws ValidationError for a_max <= 0 or n < 2.
PsiCertificate psi_certify(double a_max, std::size_t n, const PsiCertifyOptions& options = {});

/// The sorted probe abscissae used by psi_certify (2n points plus A = 0).
std::vector<double> psi_probe_points(double a_min, double a_max, std::size_t n);

}  // namespace nlbs
