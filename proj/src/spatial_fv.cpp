#include "nlbs/spatial_fv.hpp"

#include <cmath>
#include <utility>

#include "nlbs/errors.hpp"

namespace nlbs {

SpatialOperator::SpatialOperator(Grid grid, MarketParams market, double eps)
    : grid_(std::move(grid)), market_(market), eps_(eps) {
    const Eigen::Index n = grid_.size();
    if (n < 3) throw ValidationError("spatial operator needs at least 3 nodes", "nx");
    if (!(eps_ >= 0.0)) throw ValidationError("eps must be nonnegative", "eps");
    const auto& x = grid_.x;
    face_x_ = 0.5 * (x.head(n - 1) + x.tail(n - 1));
    face_dx_ = x.tail(n - 1) - x.head(n - 1);
    if ((face_dx_.array() <= 0.0).any()) {
        throw ValidationError("grid nodes must be strictly increasing", "nx");
    }
    volume_ = Eigen::VectorXd::Zero(n);
    volume_.segment(1, n - 2) = 0.5 * (x.tail(n - 2) - x.head(n - 2));
}

Eigen::VectorXd SpatialOperator::face_slopes(const Eigen::VectorXd& u) const {
    const Eigen::Index n = grid_.size();
    return (u.tail(n - 1) - u.head(n - 1)).cwiseQuotient(face_dx_);
}

Eigen::VectorXd SpatialOperator::face_coefficients(const Eigen::VectorXd& u, double t) const {
    const Eigen::VectorXd s = face_slopes(u);
    Eigen::VectorXd c(s.size());
    for (Eigen::Index f = 0; f < s.size(); ++f) {
        c[f] = diffusion_coeff(face_x_[f], t, s[f], market_, eps_);
    }
    return c;
}

Eigen::VectorXd SpatialOperator::face_fluxes(const Eigen::VectorXd& u, double t) const {
    return face_coefficients(u, t).cwiseProduct(face_slopes(u));
}

Eigen::VectorXd SpatialOperator::rhs(const Eigen::VectorXd& u, double t) const {
    const Eigen::Index n = grid_.size();
    const auto& x = grid_.x;
    const Eigen::VectorXd flux = face_fluxes(u, t);
    const double drift = market_.r - market_.q;
    Eigen::VectorXd rate = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double c = drift * x[i];
        const double upwind = c >= 0.0 ? (u[i + 1] - u[i]) / face_dx_[i]
                                       : (u[i] - u[i - 1]) / face_dx_[i - 1];
        rate[i] = (flux[i] - flux[i - 1]) / volume_[i] + c * upwind - market_.q * u[i];
    }
    return rate;
}

void SpatialOperator::add_transport(Tridiagonal<double>& op) const {
    const Eigen::Index n = grid_.size();
    const double drift = market_.r - market_.q;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double c = drift * grid_.x[i];
        if (c >= 0.0) {
            op.upper[i] += c / face_dx_[i];
            op.diag[i] -= c / face_dx_[i];
        } else {
            op.diag[i] += c / face_dx_[i - 1];
            op.lower[i] -= c / face_dx_[i - 1];
        }
        op.diag[i] -= market_.q;
    }
}

Tridiagonal<double> SpatialOperator::jacobian(const Eigen::VectorXd& u, double t) const {
    const Eigen::Index n = grid_.size();
    const Eigen::VectorXd s = face_slopes(u);
    // dF/ds = a0 + s da0/ds, with a0 affine in s
    Eigen::VectorXd g(s.size());
    for (Eigen::Index f = 0; f < s.size(); ++f) {
        g[f] = diffusion_coeff(face_x_[f], t, s[f], market_, eps_) +
               s[f] * diffusion_coeff_dp(face_x_[f], t, market_);
    }
    Tridiagonal<double> J(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double right = g[i] / face_dx_[i] / volume_[i];
        const double left = g[i - 1] / face_dx_[i - 1] / volume_[i];
        J.upper[i] += right;
        J.lower[i] += left;
        J.diag[i] -= right + left;
    }
    add_transport(J);
    return J;
}

Tridiagonal<double> SpatialOperator::frozen_operator(const Eigen::VectorXd& face_coeff) const {
    const Eigen::Index n = grid_.size();
    Tridiagonal<double> A(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double right = face_coeff[i] / face_dx_[i] / volume_[i];
        const double left = face_coeff[i - 1] / face_dx_[i - 1] / volume_[i];
        A.upper[i] += right;
        A.lower[i] += left;
        A.diag[i] -= right + left;
    }
    add_transport(A);
    return A;
}

Eigen::VectorXd semidiscrete_rhs(const Grid& grid, const Eigen::VectorXd& u, double t,
                                 const MarketParams& market, double eps) {
    return SpatialOperator(grid, market, eps).rhs(u, t);
}

Tridiagonal<double> jacobian(const Grid& grid, const Eigen::VectorXd& u, double t,
                             const MarketParams& market, double eps) {
    return SpatialOperator(grid, market, eps).jacobian(u, t);
}

}  // namespace nlbs
