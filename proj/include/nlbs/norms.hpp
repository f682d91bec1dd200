#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "nlbs/grid.hpp"
#include "nlbs/stepper.hpp"

namespace nlbs {

/// The seven discrete norms of v = u - x/b and w = u_x tracked by the
/// epsilon sweep, in report order.
enum class NormId : std::size_t {
    v_linf_l2,
    v_linf_linf,
    vx_l2_l2,
    vx_linf_l2,
    vxx_l2_l2,
    vt_l2_l2,
    w_linf_linf,
};

inline constexpr std::size_t kNormCount = 7;

struct NormSpec {
    NormId id;
    std::string_view name;
    /// Growth exponent of the a-priori bound C eps^{-p}.
    double p_bound;
};

inline constexpr std::array<NormSpec, kNormCount> kNormSpecs{{
    {NormId::v_linf_l2, "v_Linf_L2", 0.0},
    {NormId::v_linf_linf, "v_Linf_Linf", 0.0},
    {NormId::vx_l2_l2, "vx_L2_L2", 0.5},
    {NormId::vx_linf_l2, "vx_Linf_L2", 1.5},
    {NormId::vxx_l2_l2, "vxx_L2_L2", 2.0},
    {NormId::vt_l2_l2, "vt_L2_L2", 1.0},
    {NormId::w_linf_linf, "w_Linf_Linf", 4.0},
}};

/// Slack allowed on top of each bound exponent, and the stricter cap for the
/// norms whose bound does not depend on eps.
inline constexpr double kExponentSlack = 0.25;
inline constexpr double kBoundedExponentCap = 0.1;

struct NormReport {
    double eps = 0.0;
    std::array<double, kNormCount> values{};

    double operator[](NormId id) const { return values[static_cast<std::size_t>(id)]; }
    double& operator[](NormId id) { return values[static_cast<std::size_t>(id)]; }
};

/// v = u - x/b nodewise.
Eigen::VectorXd shift_to_v(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double b);

/// Trapezoid rule on arbitrary nodes.
double trapezoid(const Eigen::VectorXd& x, const Eigen::VectorXd& f);

/// Centered first differences, one-sided at the ends.
Eigen::VectorXd diff1(const Eigen::VectorXd& x, const Eigen::VectorXd& f);

/// Three-point second differences; each end reuses its neighbour's stencil.
Eigen::VectorXd diff2(const Eigen::VectorXd& x, const Eigen::VectorXd& f);

/// Norms over a trajectory: spatial L2 by trapezoid, spatial derivatives by
/// diff1/diff2, time L2 by trapezoid over snapshots, v_t by forward
/// differences (the last snapshot reuses the final difference), L-infinity
/// by maxima over nodes and snapshots. Needs at least 2 snapshots.
NormReport discrete_norms(const Trajectory& traj, double b);

/// Same, for snapshots given directly (columns are time levels).
NormReport discrete_norms(const Eigen::VectorXd& x, const std::vector<double>& times,
                          const Eigen::MatrixXd& u, double b);

/// Least-squares slope of log(value) against log(1/eps) over the last
/// `last` points (all points if fewer).
double fit_exponent(const std::vector<double>& eps, const std::vector<double>& values,
                    std::size_t last = 3);

struct ExponentCheck {
    NormId id{};
    double p_measured = 0.0;
    double p_bound = 0.0;
    bool pass = false;
};

struct SweepResult {
    std::vector<double> eps_list;
    std::vector<NormReport> reports;
    std::array<ExponentCheck, kNormCount> exponents{};
    /// ||u^{eps_k} - u^{eps_{k+1}}||_{L-inf} over t > 0 on the common grid.
    std::vector<double> cauchy;
    /// sup |v0''| per eps and its fitted exponent.
    std::vector<double> v0xx_linf;
    double v0xx_exponent = 0.0;

    bool exponents_pass() const;
    bool cauchy_decreasing() const;
};

struct SweepOptions {
    std::size_t fit_last = 3;
    int threads = 1;
    std::size_t min_band_nodes = 8;
};

/// Solves the regularized problem for each eps (largest first), restricts the
/// trajectories to a common uniform grid of base.grid.nx nodes, and fits the
/// growth exponents. Throws ValidationError when eps_list has fewer than 3
/// entries, is not strictly decreasing, or a band [K - w, K + w] holds fewer
/// than min_band_nodes grid nodes.
SweepResult epsilon_sweep(const Problem& base, const std::vector<double>& eps_list,
                          const SweepOptions& options = {});

}  // namespace nlbs
