#include "nlbs/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>

#include "nlbs/model.hpp"
#include "nlbs/norms.hpp"
#include "nlbs/payoff.hpp"
#include "nlbs/pricer.hpp"
#include "nlbs/psi_ode.hpp"

namespace nlbs {

bool AcceptanceReport::all_pass() const {
    return !criteria.empty() &&
           std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
}

std::string verdict_line(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %d %s (%.2f s): ", r.pass ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds);
    return head + r.detail;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

constexpr double kLinearEps = 1e-3;
constexpr std::size_t kLinearNx = 801;
constexpr std::size_t kLinearNt = 500;
constexpr Eigen::Index kOracleTrim = 5;

/// Runs shared between criteria are computed once.
struct Context {
    const AcceptanceOptions& opt;

    std::vector<Trajectory> linear;  // levels: base, 2x, 4x refined
    std::optional<SweepResult> sweep;
    double sweep_seconds = 0.0;
    std::optional<Trajectory> nonlinear;

    Problem linear_problem(int level) const {
        Problem p = opt.config.problem;
        p.market.a = 0.0;
        p.reg.eps = kLinearEps;
        p.reg.smoothing = 0.0;
        p.grid.kind = GridKind::uniform;
        p.grid.nx = (kLinearNx - 1) * (std::size_t{1} << level) + 1;
        p.solver.nt = kLinearNt * (std::size_t{1} << level);
        return p;
    }

    const Trajectory& linear_run(int level) {
        while (static_cast<int>(linear.size()) <= level) {
            linear.push_back(solve(linear_problem(static_cast<int>(linear.size()))));
        }
        return linear[static_cast<std::size_t>(level)];
    }

    const SweepResult& sweep_run() {
        if (!sweep) {
            const auto start = Clock::now();
            SweepOptions so;
            so.threads = opt.threads;
            sweep = epsilon_sweep(opt.config.problem, opt.config.eps_list, so);
            sweep_seconds = seconds_since(start);
        }
        return *sweep;
    }

    const Trajectory& nonlinear_run() {
        if (!nonlinear) nonlinear = solve(opt.config.problem);
        return *nonlinear;
    }
};

double oracle_error(const Trajectory& traj, const MarketParams& m) {
    const SolutionField& f = traj.final();
    const Eigen::Index n = traj.grid.size() - 2 * kOracleTrim;
    const Eigen::VectorXd x = traj.grid.x.segment(kOracleTrim, n);
    return (f.values.segment(kOracleTrim, n) - linear_delta_oracle(x, f.time, m))
        .cwiseAbs()
        .maxCoeff();
}

CriterionResult psi_lemmas(Context& ctx) {
    CriterionResult r;
    r.id = 1;
    r.name = "psi_lemmas";
    PsiCertifyOptions po;
    po.integrator.tol = ctx.opt.config.psi_tol;
    const PsiCertificate cert = psi_certify(100.0, 10000, po);
    const PsiTable origin = PsiTable::build(1.0, po.integrator);
    const bool zero_ok = origin(0.0) == 0.0;
    r.pass = cert.all_pass() && zero_ok;
    r.detail = std::string("psi(0)=0 ") + (zero_ok ? "ok" : "FAILED");
    for (const auto& c : cert.checks) {
        r.detail += "; " + c.name + " " + (c.pass ? "ok" : "FAILED") + " margin " + sci(c.worst_margin) +
                    " at A=" + fmt("%.4g", c.worst_at);
    }
    return r;
}

CriterionResult h5_bounds(Context& ctx) {
    CriterionResult r;
    r.id = 2;
    r.name = "h5_bounds";
    const double K = ctx.opt.config.problem.market.K;
    bool ok = true;
    for (double eps : {0.1, 0.01}) {
        const H5Certificate c = h5_certify(eps, 10000, K);
        const double end_err = std::max({std::abs(h5_eval(K - eps, K, eps)),
                                         std::abs(h5_eval(K + eps, K, eps) - 1.0),
                                         std::abs(h5_d1(K - eps, K, eps)), std::abs(h5_d1(K + eps, K, eps)),
                                         std::abs(h5_d2(K - eps, K, eps)), std::abs(h5_d2(K + eps, K, eps))});
        const double mid_err = std::abs(h5_eval(K, K, eps) - 0.5);
        const bool pass = c.all_pass() && end_err <= 1e-10 && mid_err <= 1e-12;
        ok = ok && pass;
        if (!r.detail.empty()) r.detail += "; ";
        r.detail += "eps=" + fmt("%g", eps) + " sup|H|=" + fmt("%.4g", c.sup_value) + " sup|H'|*eps=" +
                    fmt("%.4g", c.sup_d1 * eps) + " sup|H''|*eps^2=" + fmt("%.4g", c.sup_d2 * eps * eps) +
                    " endpoint err " + sci(end_err) + " |H(K)-0.5| " + sci(mid_err);
    }
    r.pass = ok;
    return r;
}

CriterionResult linear_oracle(Context& ctx) {
    CriterionResult r;
    r.id = 3;
    r.name = "linear_oracle";
    const auto start = Clock::now();
    const MarketParams m = ctx.linear_problem(0).market;
    const double e0 = oracle_error(ctx.linear_run(0), m);
    const double e1 = oracle_error(ctx.linear_run(1), m);
    const double order = std::log2(e0 / e1);
    const double seconds = seconds_since(start);

    // Observed order of the scheme against its own refinements, for context.
    const Trajectory& t2 = ctx.linear_run(2);
    const Eigen::VectorXd& x0 = ctx.linear[0].grid.x;
    const Eigen::VectorXd d01 = restrict_to(ctx.linear[1].grid, ctx.linear[1].final().values, x0) -
                                ctx.linear[0].final().values;
    const Eigen::VectorXd d12 = restrict_to(t2.grid, t2.final().values, x0) -
                                restrict_to(ctx.linear[1].grid, ctx.linear[1].final().values, x0);
    const double self_order =
        std::log2(d01.lpNorm<Eigen::Infinity>() / d12.lpNorm<Eigen::Infinity>());

    const double tol = ctx.opt.config.oracle_tol;
    r.pass = e0 <= tol && order >= 0.9 && seconds <= 60.0;
    r.detail = "max error " + sci(e0) + (e0 <= tol ? " <= " : " > ") + sci(tol) + "; refined error " +
               sci(e1) + ", order " + fmt("%.3f", order) + (order >= 0.9 ? " >= 0.9" : " < 0.9") +
               "; self-convergence order " + fmt("%.3f", self_order) + "; runtime " +
               fmt("%.2f", seconds) + " s";
    return r;
}

CriterionResult eps_scaling(Context& ctx) {
    CriterionResult r;
    r.id = 4;
    r.name = "eps_scaling";
    const SweepResult& s = ctx.sweep_run();
    r.pass = s.exponents_pass() && ctx.sweep_seconds <= 600.0;
    for (const auto& e : s.exponents) {
        if (!r.detail.empty()) r.detail += "; ";
        r.detail += std::string(kNormSpecs[static_cast<std::size_t>(e.id)].name) + " p=" +
                    fmt("%.3f", e.p_measured) + (e.pass ? "" : " FAILED");
    }
    r.detail += "; sweep runtime " + fmt("%.2f", ctx.sweep_seconds) + " s";
    return r;
}

CriterionResult eps_cauchy(Context& ctx) {
    CriterionResult r;
    r.id = 5;
    r.name = "eps_cauchy";
    const SweepResult& s = ctx.sweep_run();
    r.pass = s.cauchy_decreasing();
    r.detail = "deltas";
    for (double d : s.cauchy) r.detail += " " + sci(d);
    r.detail += r.pass ? " strictly decreasing" : " not strictly decreasing";
    return r;
}

double max_violation(const Trajectory& lo, const Trajectory& hi) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < lo.snapshots.size(); ++n) {
        worst = std::max(worst, (lo.snapshots[n].values - hi.snapshots[n].values).maxCoeff());
    }
    return worst;
}

CriterionResult structure_comparison(Context& ctx) {
    CriterionResult r;
    r.id = 6;
    r.name = "structure_comparison";
    const Problem& p = ctx.opt.config.problem;
    const MarketParams& m = p.market;

    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ux(0.0, p.domain.b), ut(0.0, m.T), up(-200.0, 200.0),
        uX(-100.0, 100.0), us(-1.0, 2.0);
    std::size_t proper = 0, checked = 0, value_ok = 0;
    constexpr std::size_t samples = 10000;
    for (std::size_t k = 0; k < samples; ++k) {
        const double x = ux(rng), t = ut(rng), pp = up(rng), X = uX(rng), s = us(rng);
        double s1 = us(rng), s2 = us(rng), X1 = uX(rng), X2 = uX(rng);
        if (s1 > s2) std::swap(s1, s2);
        if (X1 < X2) std::swap(X1, X2);
        const double dF = operator_F(x, t, s2, pp, X, m) - operator_F(x, t, s1, pp, X, m);
        const double scale = 1.0 + std::abs(operator_F(x, t, s1, pp, X, m));
        if (dF >= 0.0 && std::abs(dF - m.q * (s2 - s1)) <= 1e-12 * scale) ++value_ok;
        if (curvature_factor(x, t, pp, m) >= 0.0) {
            ++checked;
            if (check_proper(x, t, pp, X, s1, s2, X1, X2, s, m)) ++proper;
        }
    }
    const bool proper_ok = value_ok == samples && proper == checked;

    const Grid grid = build_grid(p);
    const double w = p.reg.half_width();
    const double K = m.K;
    const Eigen::VectorXd lo = smoothed_initial(grid.x, K + w, w);
    const Eigen::VectorXd step = grid.x.unaryExpr([K](double xi) { return u0_step(xi, K); });
    const Eigen::VectorXd hi = smoothed_initial(grid.x, K - w, w);
    const Trajectory t_lo = solve(p, lo), t_step = solve(p, step), t_hi = solve(p, hi);
    const double v1 = max_violation(t_lo, t_step);
    const double v2 = max_violation(t_step, t_hi);
    const double v3 = max_violation(t_lo, t_hi);
    const bool order_ok = v1 <= 1e-8 && v2 <= 1e-8 && v3 <= 1e-8;

    const MonotonicityReport mono = monotonicity_report(ctx.nonlinear_run());
    double worst_diff = std::numeric_limits<double>::infinity();
    for (const auto& s : mono.snapshots) worst_diff = std::min(worst_diff, s.min_forward_difference);

    r.pass = proper_ok && order_ok && mono.clean();
    r.detail = "properness " + std::to_string(proper) + "/" + std::to_string(checked) +
               " (elliptic samples), dF/ds=q " + std::to_string(value_ok) + "/" + std::to_string(samples) +
               "; comparison max(uA-uB) " + sci(v1) + " " + sci(v2) + " " + sci(v3) +
               (order_ok ? " <= 1e-8" : " > 1e-8") + "; monotonicity " +
               std::to_string(mono.flagged_count()) + " flagged, min forward difference " +
               sci(worst_diff);
    return r;
}

CriterionResult price_round_trip(Context& ctx) {
    CriterionResult r;
    r.id = 7;
    r.name = "price_round_trip";
    const Problem& p = ctx.opt.config.problem;
    const std::vector<PriceCurve> curves = reconstruct_prices(ctx.nonlinear_run(), p.market.T);
    double v0 = 0.0, slope = 0.0, ratio = 0.0;
    for (const auto& c : curves) {
        v0 = std::max(v0, std::abs(c.V[0]));
        slope = std::max(slope, far_field_slope_deviation(c));
        ratio = std::max(ratio, std::abs(far_field_ratio(c, p.market) - 1.0));
    }

    const MarketParams lm = ctx.linear_problem(0).market;
    const ResidualReport r0 = price_residual(reconstruct_prices(ctx.linear_run(0), lm.T), lm);
    const ResidualReport r1 = price_residual(reconstruct_prices(ctx.linear_run(1), lm.T), lm);
    const double order = std::log2(r0.max_scaled / r1.max_scaled);

    r.pass = v0 == 0.0 && slope <= 1e-2 && ratio <= 1e-2 && r0.max_scaled <= 5e-2 && order >= 0.9;
    r.detail = "max|V(0)| " + sci(v0) + "; far-field slope deviation " + sci(slope) +
               "; far-field ratio deviation " + sci(ratio) + "; scaled residual " + sci(r0.max_scaled) +
               (r0.max_scaled <= 5e-2 ? " <= 5e-2" : " > 5e-2") + ", refined " + sci(r1.max_scaled) +
               ", order " + fmt("%.3f", order) + (order >= 0.9 ? " >= 0.9" : " < 0.9");
    return r;
}

}  // namespace

AcceptanceReport run_acceptance(const AcceptanceOptions& options, std::ostream* log) {
    validate(options.config);
    Context ctx{options, {}, std::nullopt, 0.0, std::nullopt};
    const std::vector<std::function<CriterionResult(Context&)>> criteria{
        psi_lemmas, h5_bounds, linear_oracle, eps_scaling, eps_cauchy, structure_comparison,
        price_round_trip};

    AcceptanceReport report;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!options.only.empty() &&
            std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
            continue;
        }
        const auto start = Clock::now();
        CriterionResult res = criteria[k](ctx);
        res.seconds = seconds_since(start);
        if (id == 1 && res.seconds > 5.0) {
            res.pass = false;
            res.detail += "; runtime " + fmt("%.2f", res.seconds) + " s > 5 s";
        }
        if (log) *log << verdict_line(res) << std::endl;
        report.criteria.push_back(std::move(res));
    }
    return report;
}

}  // namespace nlbs
