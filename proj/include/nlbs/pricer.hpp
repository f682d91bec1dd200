#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "nlbs/grid.hpp"
#include "nlbs/model.hpp"
#include "nlbs/spatial_fv.hpp"
#include "nlbs/stepper.hpp"

namespace nlbs {

/// Option value V(S, tau) on the grid at backward time tau = T - t.
struct PriceCurve {
    double tau = 0.0;
    Eigen::VectorXd S;
    Eigen::VectorXd V;
};

/// V(S, tau) = int_0^S u(x, T - tau) dx by the cumulative trapezoid rule.
PriceCurve reconstruct_price(const Grid& grid, const SolutionField& field, double T);

/// Price curves for every snapshot of a trajectory, ordered by increasing t.
std::vector<PriceCurve> reconstruct_prices(const Trajectory& traj, double T);

/// Closed-form Delta of the frictionless call, e^{-qt} N(d1); the step profile at t = 0.
double linear_delta_oracle(double S, double t, const MarketParams& market);
Eigen::VectorXd linear_delta_oracle(const Eigen::VectorXd& S, double t, const MarketParams& market);

/// Centered differences of V (one-sided at the ends); recovers the Delta.
Eigen::VectorXd delta_from_price(const PriceCurve& curve);

struct ResidualOptions {
    Eigen::Index trim_nodes = 5;
    /// Levels with t < t_min_fraction * T are left out.
    double t_min_fraction = 0.1;
};

/// Residual of the price equation
///   V_tau + 0.5 sigma^2 (1 + e^{r(T-tau)} a^2 S^2 V_SS) S^2 V_SS + (r-q) S V_S - r V
/// with V_tau from backward differences in t, V_S and V_SS from centered
/// differences in S. Values are divided by the largest individual term
/// magnitude found anywhere in the trimmed region.
struct ResidualReport {
    std::vector<double> tau;         ///< one entry per retained level
    Eigen::VectorXd S;               ///< retained interior nodes
    Eigen::MatrixXd scaled;          ///< levels x nodes
    double scale = 0.0;
    double max_scaled = 0.0;
    double l2_scaled = 0.0;          ///< space-time L2 of the scaled residual
};

/// Needs at least 3 curves on one grid, ordered by increasing t = T - tau.
ResidualReport price_residual(const std::vector<PriceCurve>& curves, const MarketParams& market,
                              const ResidualOptions& options = {});

/// V(b, tau) / (b - K e^{-r (T - tau)}).
double far_field_ratio(const PriceCurve& curve, const MarketParams& market);

/// Largest |V_S - 1| over the last `count` interior nodes (centered differences).
double far_field_slope_deviation(const PriceCurve& curve, Eigen::Index count = 5);

}  // namespace nlbs
