#include "nlbs/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "nlbs/errors.hpp"
#include "nlbs/payoff.hpp"

namespace nlbs {

void validate(const Problem& p) {
    validate(p.market, p.domain, p.reg);
    if (p.grid.nx < 5) throw ValidationError("nx: must be at least 5", "nx");
    if (p.grid.kind == GridKind::graded && !(p.grid.grade_ratio > 1.0)) {
        throw ValidationError("grade_ratio: must exceed 1", "grade_ratio");
    }
    if (p.market.T > 0.0 && p.solver.nt < 1) throw ValidationError("nt: must be positive", "nt");
    if (!(p.solver.tol_newton > 0.0)) {
        throw ValidationError("tol_newton: must be positive", "tol_newton");
    }
    if (p.solver.max_iter < 2) throw ValidationError("max_iter: must be at least 2", "max_iter");
    if (p.solver.max_halvings < 0) {
        throw ValidationError("max_halvings: must be nonnegative", "max_halvings");
    }
    if (!(p.solver.dt_out >= 0.0)) throw ValidationError("dt_out: must be nonnegative", "dt_out");
}

Grid build_grid(const Problem& p) {
    if (p.grid.kind == GridKind::graded) {
        return make_graded_grid(p.domain.b, p.market.K, p.reg.half_width(), p.grid.nx,
                                p.grid.grade_ratio);
    }
    return make_uniform_grid(p.domain.b, p.grid.nx);
}

Eigen::VectorXd initial_profile(const Problem& p, const Grid& grid) {
    return smoothed_initial(grid.x, p.market.K, p.reg.half_width());
}

namespace {

// G(u) = u - u_n - dt R(u, t1) on interior rows; boundary rows pin the Dirichlet data.
Eigen::VectorXd residual(const SpatialOperator& op, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& u_n, double t1, double dt) {
    Eigen::VectorXd g = u - u_n - dt * op.rhs(u, t1);
    const Eigen::Index last = u.size() - 1;
    g[0] = u[0];
    g[last] = u[last] - 1.0;
    return g;
}

// I - dt A with identity boundary rows.
Tridiagonal<double> implicit_matrix(Tridiagonal<double> A, double dt) {
    const Eigen::Index n = A.size();
    A.lower *= -dt;
    A.upper *= -dt;
    A.diag = Eigen::VectorXd::Ones(n) - dt * A.diag;
    A.diag[0] = 1.0;
    A.upper[0] = 0.0;
    A.diag[n - 1] = 1.0;
    A.lower[n - 1] = 0.0;
    return A;
}

}  // namespace

StepResult step_implicit(const SpatialOperator& op, const Eigen::VectorXd& u_n, double t_n,
                         double dt, double tol, int max_iter) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive", "nt");
    const double t1 = t_n + dt;
    const Eigen::Index last = u_n.size() - 1;

    StepResult out;
    out.u = u_n;
    out.u[0] = 0.0;
    out.u[last] = 1.0;
    Eigen::VectorXd g = residual(op, out.u, u_n, t1, dt);
    double res = g.lpNorm<Eigen::Infinity>();

    int failures = 0;
    while (res > tol && out.newton_iterations < max_iter && failures < max_iter / 2) {
        ++out.newton_iterations;
        Eigen::VectorXd step;
        try {
            step = solve(implicit_matrix(op.jacobian(out.u, t1), dt), Eigen::VectorXd(-g));
        } catch (const std::runtime_error&) {
            failures = max_iter;
            break;
        }
        double lambda = 1.0;
        bool decreased = false;
        for (int k = 0; k < 12; ++k) {
            const Eigen::VectorXd trial = out.u + lambda * step;
            const Eigen::VectorXd g_trial = residual(op, trial, u_n, t1, dt);
            const double res_trial = g_trial.lpNorm<Eigen::Infinity>();
            if (std::isfinite(res_trial) && res_trial < res) {
                out.u = trial;
                g = g_trial;
                res = res_trial;
                decreased = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!decreased || lambda < 1.0) ++failures;
        if (!decreased) break;
    }

    if (res > tol) {
        // Picard: freeze a0^eps at the current iterate and solve the linear system.
        Eigen::VectorXd rhs = u_n;
        rhs[0] = 0.0;
        rhs[last] = 1.0;
        while (res > tol && out.picard_iterations < max_iter) {
            ++out.picard_iterations;
            const Tridiagonal<double> A = op.frozen_operator(op.face_coefficients(out.u, t1));
            Eigen::VectorXd next;
            try {
                next = solve(implicit_matrix(A, dt), rhs);
            } catch (const std::runtime_error&) {
                break;
            }
            const Eigen::VectorXd g_next = residual(op, next, u_n, t1, dt);
            const double res_next = g_next.lpNorm<Eigen::Infinity>();
            if (!std::isfinite(res_next)) break;
            out.u = next;
            res = res_next;
        }
    }

    out.residual = res;
    if (!(res <= tol)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "implicit step to t = %.6g (dt = %.3e) failed: residual %.3e after %d Newton "
                      "and %d Picard iterations",
                      t1, dt, res, out.newton_iterations, out.picard_iterations);
        throw SolverFailure(msg);
    }
    return out;
}

std::vector<double> Trajectory::times() const {
    std::vector<double> t;
    t.reserve(snapshots.size());
    for (const auto& s : snapshots) t.push_back(s.time);
    return t;
}

std::vector<std::size_t> Trajectory::output_indices(double dt_out) const {
    std::vector<std::size_t> idx;
    if (snapshots.empty()) return idx;
    std::size_t stride = 1;
    if (dt_out > 0.0 && dt > 0.0) {
        stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(dt_out / dt)));
    }
    for (std::size_t i = 0; i < snapshots.size(); i += stride) idx.push_back(i);
    if (idx.back() != snapshots.size() - 1) idx.push_back(snapshots.size() - 1);
    return idx;
}

int Trajectory::total_halvings() const {
    int total = 0;
    for (const auto& s : steps) total += s.substeps - 1;
    return total;
}

namespace {

double min_forward_difference(const Eigen::VectorXd& u, Eigen::Index* where = nullptr) {
    const Eigen::Index n = u.size();
    Eigen::Index at = 0;
    const double m = (u.tail(n - 1) - u.head(n - 1)).minCoeff(&at);
    if (where) *where = at;
    return m;
}

struct Advance {
    const SpatialOperator& op;
    const SolverOptions& opt;
    StepDiagnostics diag;

    Eigen::VectorXd run(const Eigen::VectorXd& u, double t, double dt, int depth) {
        try {
            StepResult r = step_implicit(op, u, t, dt, opt.tol_newton, opt.max_iter);
            diag.newton_iterations += r.newton_iterations;
            diag.picard_iterations += r.picard_iterations;
            diag.residual = std::max(diag.residual, r.residual);
            return std::move(r.u);
        } catch (const SolverFailure&) {
            if (depth >= opt.max_halvings) throw;
        }
        diag.halvings = std::max(diag.halvings, depth + 1);
        diag.substeps += 1;
        const Eigen::VectorXd half = run(u, t, 0.5 * dt, depth + 1);
        return run(half, t + 0.5 * dt, 0.5 * dt, depth + 1);
    }
};

}  // namespace

Trajectory solve(const Problem& problem) {
    validate(problem);
    const Grid grid = build_grid(problem);
    return solve(problem, initial_profile(problem, grid));
}

Trajectory solve(const Problem& problem, const Eigen::VectorXd& initial) {
    validate(problem);
    Trajectory traj;
    traj.grid = build_grid(problem);
    if (initial.size() != traj.grid.size()) {
        throw ValidationError("initial profile size does not match the grid", "nx");
    }
    if (initial[0] != 0.0 || initial[initial.size() - 1] != 1.0) {
        throw ValidationError("initial profile must satisfy u(0) = 0 and u(b) = 1");
    }
    traj.snapshots.push_back({initial, 0.0});
    if (problem.market.T == 0.0) return traj;

    const SpatialOperator op(traj.grid, problem.market, problem.reg.eps);
    const std::size_t nt = problem.solver.nt;
    traj.dt = problem.market.T / static_cast<double>(nt);
    traj.snapshots.reserve(nt + 1);
    traj.steps.reserve(nt);

    Eigen::VectorXd u = initial;
    for (std::size_t n = 0; n < nt; ++n) {
        const double t = problem.market.T * static_cast<double>(n) / static_cast<double>(nt);
        const double t_next =
            n + 1 == nt ? problem.market.T
                        : problem.market.T * static_cast<double>(n + 1) / static_cast<double>(nt);
        Advance adv{op, problem.solver, {}};
        adv.diag.time = t_next;
        adv.diag.dt = t_next - t;
        u = adv.run(u, t, t_next - t, 0);
        adv.diag.min_forward_difference = min_forward_difference(u);
        traj.steps.push_back(adv.diag);
        traj.snapshots.push_back({u, t_next});
    }
    return traj;
}

bool MonotonicityReport::clean() const { return flagged_count() == 0; }

std::size_t MonotonicityReport::flagged_count() const {
    return static_cast<std::size_t>(std::count_if(snapshots.begin(), snapshots.end(),
                                                  [](const auto& s) { return s.flagged; }));
}

MonotonicityReport monotonicity_report(const Trajectory& traj, double threshold) {
    MonotonicityReport report;
    report.threshold = threshold;
    report.snapshots.reserve(traj.snapshots.size());
    for (const auto& snap : traj.snapshots) {
        SnapshotMonotonicity m;
        m.time = snap.time;
        m.min_forward_difference = min_forward_difference(snap.values, &m.location);
        m.flagged = m.min_forward_difference < threshold;
        report.snapshots.push_back(m);
    }
    return report;
}

}  // namespace nlbs
