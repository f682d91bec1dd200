#include "nlbs/norms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "nlbs/errors.hpp"
#include "nlbs/payoff.hpp"

namespace nlbs {

Eigen::VectorXd shift_to_v(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double b) {
    return u - x / b;
}

double trapezoid(const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
    const Eigen::Index n = x.size();
    double sum = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) sum += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
    return sum;
}

Eigen::VectorXd diff1(const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (x[i + 1] - x[i - 1]);
    d[0] = (f[1] - f[0]) / (x[1] - x[0]);
    d[n - 1] = (f[n - 1] - f[n - 2]) / (x[n - 1] - x[n - 2]);
    return d;
}

Eigen::VectorXd diff2(const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
        d[i] = 2.0 * ((f[i + 1] - f[i]) / hr - (f[i] - f[i - 1]) / hl) / (hl + hr);
    }
    d[0] = d[1];
    d[n - 1] = d[n - 2];
    return d;
}

namespace {

double l2(const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
    return std::sqrt(trapezoid(x, f.cwiseAbs2()));
}

double time_l2(const std::vector<double>& t, const std::vector<double>& sq) {
    double sum = 0.0;
    for (std::size_t n = 1; n < t.size(); ++n) sum += 0.5 * (t[n] - t[n - 1]) * (sq[n] + sq[n - 1]);
    return std::sqrt(sum);
}

}  // namespace

NormReport discrete_norms(const Eigen::VectorXd& x, const std::vector<double>& times,
                          const Eigen::MatrixXd& u, double b) {
    const std::size_t m = times.size();
    if (m < 2 || static_cast<std::size_t>(u.cols()) != m || u.rows() != x.size()) {
        throw ValidationError("discrete norms need at least 2 snapshots on the grid");
    }
    NormReport rep;
    std::vector<double> vx_sq(m), vxx_sq(m), vt_sq(m);
    Eigen::VectorXd v_prev;
    std::vector<Eigen::VectorXd> vs;
    vs.reserve(m);
    for (std::size_t n = 0; n < m; ++n) vs.push_back(shift_to_v(x, u.col(static_cast<Eigen::Index>(n)), b));

    for (std::size_t n = 0; n < m; ++n) {
        const Eigen::VectorXd& v = vs[n];
        const Eigen::VectorXd vx = diff1(x, v);
        const Eigen::VectorXd w = diff1(x, u.col(static_cast<Eigen::Index>(n)));
        const double v_l2 = l2(x, v);
        const double vx_l2 = l2(x, vx);
        rep[NormId::v_linf_l2] = std::max(rep[NormId::v_linf_l2], v_l2);
        rep[NormId::v_linf_linf] = std::max(rep[NormId::v_linf_linf], v.cwiseAbs().maxCoeff());
        rep[NormId::vx_linf_l2] = std::max(rep[NormId::vx_linf_l2], vx_l2);
        rep[NormId::w_linf_linf] = std::max(rep[NormId::w_linf_linf], w.cwiseAbs().maxCoeff());
        vx_sq[n] = vx_l2 * vx_l2;
        const double vxx_l2 = l2(x, diff2(x, v));
        vxx_sq[n] = vxx_l2 * vxx_l2;
        const std::size_t k = n + 1 < m ? n : n - 1;
        const Eigen::VectorXd vt = (vs[k + 1] - vs[k]) / (times[k + 1] - times[k]);
        const double vt_l2 = l2(x, vt);
        vt_sq[n] = vt_l2 * vt_l2;
    }
    rep[NormId::vx_l2_l2] = time_l2(times, vx_sq);
    rep[NormId::vxx_l2_l2] = time_l2(times, vxx_sq);
    rep[NormId::vt_l2_l2] = time_l2(times, vt_sq);
    return rep;
}

NormReport discrete_norms(const Trajectory& traj, double b) {
    const std::size_t m = traj.snapshots.size();
    Eigen::MatrixXd u(traj.grid.size(), static_cast<Eigen::Index>(m));
    for (std::size_t n = 0; n < m; ++n) u.col(static_cast<Eigen::Index>(n)) = traj.snapshots[n].values;
    return discrete_norms(traj.grid.x, traj.times(), u, b);
}

double fit_exponent(const std::vector<double>& eps, const std::vector<double>& values,
                    std::size_t last) {
    if (eps.size() != values.size() || eps.size() < 2) {
        throw ValidationError("exponent fit needs at least 2 matching points");
    }
    const std::size_t k = std::min(std::max<std::size_t>(last, 2), eps.size());
    const std::size_t first = eps.size() - k;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = first; i < eps.size(); ++i) {
        mx += std::log(1.0 / eps[i]);
        my += std::log(values[i]);
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = first; i < eps.size(); ++i) {
        const double dx = std::log(1.0 / eps[i]) - mx;
        sxy += dx * (std::log(values[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

bool SweepResult::exponents_pass() const {
    return std::all_of(exponents.begin(), exponents.end(), [](const auto& e) { return e.pass; });
}

bool SweepResult::cauchy_decreasing() const {
    if (cauchy.size() < 2) return false;
    for (std::size_t k = 1; k < cauchy.size(); ++k) {
        if (!(cauchy[k] < cauchy[k - 1])) return false;
    }
    return true;
}

SweepResult epsilon_sweep(const Problem& base, const std::vector<double>& eps_list,
                          const SweepOptions& options) {
    if (eps_list.size() < 3) throw ValidationError("eps_list: needs at least 3 values", "eps_list");
    for (std::size_t k = 1; k < eps_list.size(); ++k) {
        if (!(eps_list[k] < eps_list[k - 1])) {
            throw ValidationError("eps_list: must be strictly decreasing", "eps_list");
        }
    }

    std::vector<Problem> problems;
    for (double eps : eps_list) {
        Problem p = base;
        p.reg.eps = eps;
        validate(p);
        const Grid g = build_grid(p);
        const double w = p.reg.half_width();
        const auto inside = (g.x.array() >= p.market.K - w && g.x.array() <= p.market.K + w).count();
        if (static_cast<std::size_t>(inside) < options.min_band_nodes) {
            throw ValidationError("eps_list: grid under-resolves the band for eps = " +
                                      std::to_string(eps) + " (" + std::to_string(inside) +
                                      " nodes, need " + std::to_string(options.min_band_nodes) + ")",
                                  "nx");
        }
        problems.push_back(p);
    }

    std::vector<Trajectory> trajs(problems.size());
    {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t k = next++; k < problems.size(); k = next++) {
                try {
                    trajs[k] = solve(problems[k]);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        const int n_threads = std::clamp<int>(options.threads, 1, static_cast<int>(problems.size()));
        std::vector<std::thread> pool;
        for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    SweepResult res;
    res.eps_list = eps_list;
    for (std::size_t k = 0; k < trajs.size(); ++k) {
        NormReport r = discrete_norms(trajs[k], base.domain.b);
        r.eps = eps_list[k];
        res.reports.push_back(r);
        const Grid& g = trajs[k].grid;
        const Eigen::VectorXd v0 = shift_to_v(g.x, trajs[k].snapshots.front().values, base.domain.b);
        res.v0xx_linf.push_back(diff2(g.x, v0).cwiseAbs().maxCoeff());
    }
    for (std::size_t j = 0; j < kNormCount; ++j) {
        std::vector<double> vals;
        for (const auto& r : res.reports) vals.push_back(r.values[j]);
        ExponentCheck& e = res.exponents[j];
        e.id = kNormSpecs[j].id;
        e.p_bound = kNormSpecs[j].p_bound;
        e.p_measured = fit_exponent(eps_list, vals, options.fit_last);
        e.pass = e.p_measured <= e.p_bound + kExponentSlack &&
                 (e.p_bound > 0.0 || e.p_measured <= kBoundedExponentCap);
    }
    res.v0xx_exponent = fit_exponent(eps_list, res.v0xx_linf, options.fit_last);

    const Grid common = make_uniform_grid(base.domain.b, base.grid.nx);
    for (std::size_t k = 0; k + 1 < trajs.size(); ++k) {
        const auto& A = trajs[k];
        const auto& B = trajs[k + 1];
        const std::size_t m = std::min(A.snapshots.size(), B.snapshots.size());
        double delta = 0.0;
        for (std::size_t n = 1; n < m; ++n) {
            const Eigen::VectorXd ua = restrict_to(A.grid, A.snapshots[n].values, common.x);
            const Eigen::VectorXd ub = restrict_to(B.grid, B.snapshots[n].values, common.x);
            delta = std::max(delta, (ua - ub).cwiseAbs().maxCoeff());
        }
        res.cauchy.push_back(delta);
    }
    return res;
}

}  // namespace nlbs
