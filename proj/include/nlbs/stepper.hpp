#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "nlbs/grid.hpp"
#include "nlbs/model.hpp"
#include "nlbs/spatial_fv.hpp"

namespace nlbs {

struct GridSpec {
    std::size_t nx = 1601;
    GridKind kind = GridKind::uniform;
    double grade_ratio = 1.05;
};

struct SolverOptions {
    std::size_t nt = 1000;
    double tol_newton = 1e-10;
    int max_iter = 20;
    int max_halvings = 10;
    /// Snapshot cadence for file output; 0 writes every step.
    double dt_out = 0.0;
};

/// Everything needed to march the regularized Delta equation.
struct Problem {
    MarketParams market{};
    DomainParams domain{};
    RegularizationParams reg{};
    GridSpec grid{};
    SolverOptions solver{};
};

/// Throws ValidationError naming the offending key.
void validate(const Problem& problem);

Grid build_grid(const Problem& problem);

/// Smoothed initial Delta sampled on the problem grid.
Eigen::VectorXd initial_profile(const Problem& problem, const Grid& grid);

struct StepResult {
    Eigen::VectorXd u;
    int newton_iterations = 0;
    int picard_iterations = 0;
    double residual = 0.0;
};

/// One backward-Euler step: solves u - u_n - dt * rhs(u, t_n + dt) = 0 with
/// identity rows pinning u_0 = 0 and u_N = 1. Newton with residual-based
/// damping; after max_iter/2 non-decreasing steps, or max_iter iterations
/// without convergence, Picard sweeps with frozen face coefficients take over
/// for up to max_iter iterations. Throws SolverFailure if the residual
/// max-norm is still above tol.
StepResult step_implicit(const SpatialOperator& op, const Eigen::VectorXd& u_n, double t_n,
                         double dt, double tol, int max_iter);

struct StepDiagnostics {
    double time = 0.0;
    double dt = 0.0;             ///< nominal step
    int substeps = 1;            ///< > 1 when the step was halved
    int halvings = 0;            ///< deepest halving level used
    int newton_iterations = 0;   ///< summed over substeps
    int picard_iterations = 0;
    double residual = 0.0;       ///< worst accepted residual over substeps
    double min_forward_difference = 0.0;
};

struct Trajectory {
    Grid grid;
    std::vector<SolutionField> snapshots;
    double dt = 0.0;
    std::vector<StepDiagnostics> steps;

    const SolutionField& final() const { return snapshots.back(); }
    std::vector<double> times() const;
    /// Indices of snapshots on the dt_out cadence (first and last always kept).
    std::vector<std::size_t> output_indices(double dt_out) const;
    int total_halvings() const;
};

/// Marches the smoothed initial profile from t = 0 to T in nt uniform steps.
Trajectory solve(const Problem& problem);

/// As above from a caller-supplied initial profile (must be pinned to 0 and 1).
Trajectory solve(const Problem& problem, const Eigen::VectorXd& initial);

struct SnapshotMonotonicity {
    double time = 0.0;
    double min_forward_difference = 0.0;
    Eigen::Index location = 0;  ///< left node of the most negative difference
    bool flagged = false;
};

struct MonotonicityReport {
    std::vector<SnapshotMonotonicity> snapshots;
    double threshold = -1e-8;
    bool clean() const;
    std::size_t flagged_count() const;
};

/// Most negative forward difference u_{i+1} - u_i per snapshot; values below
/// threshold are flagged.
MonotonicityReport monotonicity_report(const Trajectory& traj, double threshold = -1e-8);

}  // namespace nlbs
