#pragma once

#include <cmath>

#include "nlbs/errors.hpp"

namespace nlbs {

/// Market constants of the transaction-cost model.
struct MarketParams {
    double sigma = 0.2;  ///< volatility
    double r = 0.1;      ///< riskless rate
    double q = 0.0;      ///< dividend rate
    double a = 0.02;     ///< transaction-cost parameter
    double K = 1.0;      ///< strike
    double T = 0.5;      ///< horizon
};

/// Truncated spatial domain [0, b].
struct DomainParams {
    double b = 4.0;
};

/// Vanishing-viscosity parameter. `smoothing` is the half-width of the
/// Hermite band around K; a nonpositive value means "same as eps".
struct RegularizationParams {
    double eps = 0.025;
    double smoothing = 0.0;

    double half_width() const noexcept { return smoothing > 0.0 ? smoothing : eps; }
};

/// Throws ValidationError naming the first violated constraint.
void validate(const MarketParams& market);
void validate(const MarketParams& market, const DomainParams& domain);
void validate(const MarketParams& market, const DomainParams& domain,
              const RegularizationParams& reg);

/// a0^eps(x, t, p) = 0.5 x^2 sigma^2 (1 + e^{rt} a^2 x^2 p) + eps.
template <typename Scalar>
Scalar diffusion_coeff(Scalar x, Scalar t, Scalar p, const MarketParams& m, Scalar eps) {
    using std::exp;
    const Scalar x2 = x * x;
    const Scalar s2 = Scalar(m.sigma * m.sigma);
    return Scalar(0.5) * x2 * s2 * (Scalar(1) + exp(Scalar(m.r) * t) * Scalar(m.a * m.a) * x2 * p) +
           eps;
}

/// d a0^eps / d p, independent of p.
template <typename Scalar>
Scalar diffusion_coeff_dp(Scalar x, Scalar t, const MarketParams& m) {
    using std::exp;
    const Scalar x2 = x * x;
    return Scalar(0.5) * x2 * Scalar(m.sigma * m.sigma) * exp(Scalar(m.r) * t) *
           Scalar(m.a * m.a) * x2;
}

/// Nondivergence form of the Delta equation, u_t + F(x, t, u, u_x, u_xx) = 0:
///   F = -(0.5 x^2 sigma^2 (1 + 2 e^{rt} a^2 x^2 p)) X
///       - 2 sigma^2 e^{rt} a^2 x^3 p^2 - (r - q + sigma^2) x p + q s
template <typename Scalar>
Scalar operator_F(Scalar x, Scalar t, Scalar s, Scalar p, Scalar X, const MarketParams& m) {
    using std::exp;
    const Scalar s2 = Scalar(m.sigma * m.sigma);
    const Scalar k = exp(Scalar(m.r) * t) * Scalar(m.a * m.a);
    const Scalar x2 = x * x;
    return -(Scalar(0.5) * x2 * s2 * (Scalar(1) + Scalar(2) * k * x2 * p)) * X -
           Scalar(2) * s2 * k * x2 * x * p * p - Scalar(m.r - m.q + m.sigma * m.sigma) * x * p +
           Scalar(m.q) * s;
}

/// Coefficient of u_xx in -F; nonnegative exactly when F is degenerate elliptic.
template <typename Scalar>
Scalar curvature_factor(Scalar x, Scalar t, Scalar p, const MarketParams& m) {
    using std::exp;
    const Scalar x2 = x * x;
    return Scalar(0.5) * x2 * Scalar(m.sigma * m.sigma) *
           (Scalar(1) + Scalar(2) * exp(Scalar(m.r) * t) * Scalar(m.a * m.a) * x2 * p);
}

/// Properness of F at (x, t, p): nonincreasing in curvature for X1 >= X2 and
/// nondecreasing in the value for s1 <= s2. Arguments must be ordered.
template <typename Scalar>
bool check_proper(Scalar x, Scalar t, Scalar p, Scalar X, Scalar s1, Scalar s2, Scalar X1,
                  Scalar X2, Scalar s, const MarketParams& m) {
    if (!(s1 <= s2) || !(X1 >= X2)) {
        throw ValidationError("check_proper expects s1 <= s2 and X1 >= X2");
    }
    const bool curvature = operator_F(x, t, s, p, X1, m) <= operator_F(x, t, s, p, X2, m);
    const bool value = operator_F(x, t, s1, p, X, m) <= operator_F(x, t, s2, p, X, m);
    return curvature && value;
}

}  // namespace nlbs
