#pragma once

#include <cstddef>
#include <stdexcept>

#include <Eigen/Core>

#include "nlbs/errors.hpp"

namespace nlbs {

/// Delta of the call payoff: 0 below the strike, 1/2 at it, 1 above.
template <typename Scalar>
Scalar u0_step(Scalar x, Scalar K) {
    if (x < K) return Scalar(0);
    if (x > K) return Scalar(1);
    return Scalar(0.5);
}

namespace detail {

template <typename Scalar>
void require_band(Scalar x, Scalar K, Scalar eps) {
    if (!(eps > Scalar(0))) throw ValidationError("Hermite band half-width must be positive", "eps");
    if (x < K - eps || x > K + eps) {
        throw std::domain_error("Hermite quintic evaluated outside [K - eps, K + eps]");
    }
}

// s = (x - K + eps) / (2 eps), clamped against roundoff at the band edges.
template <typename Scalar>
Scalar band_coordinate(Scalar x, Scalar K, Scalar eps) {
    require_band(x, K, eps);
    const Scalar s = (x - K + eps) / (Scalar(2) * eps);
    return s < Scalar(0) ? Scalar(0) : (s > Scalar(1) ? Scalar(1) : s);
}

}  // namespace detail

/// Quintic Hermite bridge on [K - eps, K + eps] from 0 to 1 with vanishing first
/// and second derivatives at both ends. Algebraically equal to the Newton form
///   y^3/(8 e^3) - 3 y^3 z/(16 e^4) + 3 y^3 z^2/(16 e^5),  y = x-K+e, z = x-K-e,
/// but evaluated as the smoothstep s^3 (10 - 15 s + 6 s^2), s = y/(2e), which is
/// exact at the endpoints and never leaves [0, 1].
template <typename Scalar>
Scalar h5_eval(Scalar x, Scalar K, Scalar eps) {
    const Scalar s = detail::band_coordinate(x, K, eps);
    return s * s * s * (Scalar(10) + s * (Scalar(6) * s - Scalar(15)));
}

template <typename Scalar>
Scalar h5_d1(Scalar x, Scalar K, Scalar eps) {
    const Scalar s = detail::band_coordinate(x, K, eps);
    const Scalar t = Scalar(1) - s;
    return Scalar(15) * s * s * t * t / eps;
}

template <typename Scalar>
Scalar h5_d2(Scalar x, Scalar K, Scalar eps) {
    const Scalar s = detail::band_coordinate(x, K, eps);
    return Scalar(15) * s * (Scalar(1) - s) * (Scalar(1) - Scalar(2) * s) / (eps * eps);
}

/// Step profile with the band [K - w, K + w] replaced by the Hermite quintic.
template <typename Scalar>
Scalar smoothed_initial(Scalar x, Scalar K, Scalar w) {
    if (x < K - w) return Scalar(0);
    if (x > K + w) return Scalar(1);
    return h5_eval(x, K, w);
}

/// Nodal samples of the smoothed initial Delta.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> smoothed_initial(
    const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar K, typename Derived::Scalar w) {
    using Scalar = typename Derived::Scalar;
    return x.unaryExpr([K, w](Scalar xi) { return smoothed_initial(xi, K, w); });
}

struct H5Certificate {
    double sup_value = 0.0;
    double sup_d1 = 0.0;
    double sup_d2 = 0.0;
    double bound_value = 10.0;
    double bound_d1 = 0.0;  ///< 45/2 / eps
    double bound_d2 = 0.0;  ///< 81/2 / eps^2
    bool value_ok = false;
    bool d1_ok = false;
    bool d2_ok = false;
    bool all_pass() const noexcept { return value_ok && d1_ok && d2_ok; }
};

/// Samples H5, H5' and H5'' on n equispaced points of the band (endpoints
/// included) and compares the suprema with 10, 22.5/eps and 40.5/eps^2.
H5Certificate h5_certify(double eps, std::size_t n, double K = 1.0);

}  // namespace nlbs
