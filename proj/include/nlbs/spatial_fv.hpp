#pragma once

#include <Eigen/Core>

#include "nlbs/grid.hpp"
#include "nlbs/model.hpp"
#include "nlbs/tridiagonal.hpp"

namespace nlbs {

/// Nodal Delta values at one time level. values[0] = 0 and values[N] = 1 are
/// the Dirichlet data.
struct SolutionField {
    Eigen::VectorXd values;
    double time = 0.0;
};

/// Conservative finite-volume discretization of
///   u_t = (a0^eps(x, t, u_x) u_x)_x + (r - q) x u_x - q u
/// on a fixed grid. Faces sit at the midpoints between nodes; the face flux is
/// a0^eps(x_face, t, s) s with s the secant slope across the face. Control
/// volumes have width (x_{i+1} - x_{i-1}) / 2. Advection is first-order upwind.
/// Boundary rows of the rate vector and of the Jacobian are zero.
class SpatialOperator {
public:
    SpatialOperator(Grid grid, MarketParams market, double eps);

    const Grid& grid() const noexcept { return grid_; }
    const MarketParams& market() const noexcept { return market_; }
    double eps() const noexcept { return eps_; }

    /// Face slopes s_{i+1/2}, i = 0..N-1.
    Eigen::VectorXd face_slopes(const Eigen::VectorXd& u) const;
    /// Face fluxes a0^eps(x_{i+1/2}, t, s) s, i = 0..N-1.
    Eigen::VectorXd face_fluxes(const Eigen::VectorXd& u, double t) const;
    /// Face diffusion coefficients a0^eps(x_{i+1/2}, t, s), i = 0..N-1.
    Eigen::VectorXd face_coefficients(const Eigen::VectorXd& u, double t) const;

    /// Semidiscrete rates du_i/dt.
    Eigen::VectorXd rhs(const Eigen::VectorXd& u, double t) const;

    /// Exact derivative of rhs with respect to the nodal values.
    Tridiagonal<double> jacobian(const Eigen::VectorXd& u, double t) const;

    /// The operator with face diffusion coefficients frozen; rhs(u) equals
    /// frozen_operator(face_coefficients(u, t)) * u.
    Tridiagonal<double> frozen_operator(const Eigen::VectorXd& face_coeff) const;

    /// Control-volume widths (zero at the two boundary nodes).
    const Eigen::VectorXd& volumes() const noexcept { return volume_; }

private:
    void add_transport(Tridiagonal<double>& op) const;

    Grid grid_;
    MarketParams market_;
    double eps_;
    Eigen::VectorXd face_x_;
    Eigen::VectorXd face_dx_;
    Eigen::VectorXd volume_;
};

/// Free-function forms.
Eigen::VectorXd semidiscrete_rhs(const Grid& grid, const Eigen::VectorXd& u, double t,
                                 const MarketParams& market, double eps);
Tridiagonal<double> jacobian(const Grid& grid, const Eigen::VectorXd& u, double t,
                             const MarketParams& market, double eps);

}  // namespace nlbs
