#include "nlbs/pricer.hpp"

#include <algorithm>
#include <cmath>

#include "nlbs/errors.hpp"
#include "nlbs/payoff.hpp"

namespace nlbs {

PriceCurve reconstruct_price(const Grid& grid, const SolutionField& field, double T) {
    PriceCurve c;
    c.tau = T - field.time;
    c.S = grid.x;
    c.V = Eigen::VectorXd::Zero(grid.size());
    const auto& u = field.values;
    for (Eigen::Index i = 1; i < grid.size(); ++i) {
        c.V[i] = c.V[i - 1] + 0.5 * (grid.x[i] - grid.x[i - 1]) * (u[i] + u[i - 1]);
    }
    return c;
}

std::vector<PriceCurve> reconstruct_prices(const Trajectory& traj, double T) {
    std::vector<PriceCurve> out;
    out.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) out.push_back(reconstruct_price(traj.grid, s, T));
    return out;
}

double linear_delta_oracle(double S, double t, const MarketParams& m) {
    if (t <= 0.0) return u0_step(S, m.K);
    if (S <= 0.0) return 0.0;
    const double vol = m.sigma * std::sqrt(t);
    const double d1 = (std::log(S / m.K) + (m.r - m.q + 0.5 * m.sigma * m.sigma) * t) / vol;
    return std::exp(-m.q * t) * 0.5 * std::erfc(-d1 / std::sqrt(2.0));
}

Eigen::VectorXd linear_delta_oracle(const Eigen::VectorXd& S, double t, const MarketParams& m) {
    return S.unaryExpr([&](double s) { return linear_delta_oracle(s, t, m); });
}

Eigen::VectorXd delta_from_price(const PriceCurve& c) {
    const Eigen::Index n = c.S.size();
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        d[i] = (c.V[i + 1] - c.V[i - 1]) / (c.S[i + 1] - c.S[i - 1]);
    }
    d[0] = (c.V[1] - c.V[0]) / (c.S[1] - c.S[0]);
    d[n - 1] = (c.V[n - 1] - c.V[n - 2]) / (c.S[n - 1] - c.S[n - 2]);
    return d;
}

ResidualReport price_residual(const std::vector<PriceCurve>& curves, const MarketParams& m,
                              const ResidualOptions& opt) {
    if (curves.size() < 3) {
        throw ValidationError("price residual needs at least 3 reconstruction times");
    }
    const Eigen::Index n = curves.front().S.size();
    const Eigen::Index lo = std::max<Eigen::Index>(1, opt.trim_nodes);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 2, n - 1 - opt.trim_nodes);
    if (hi < lo) throw ValidationError("grid too small for the trimmed residual region");

    const double T = m.T;
    const double s2 = m.sigma * m.sigma;

    ResidualReport rep;
    rep.S = curves.front().S.segment(lo, hi - lo + 1);

    struct Level {
        double tau;
        double dt;
        Eigen::VectorXd residual;
        Eigen::VectorXd magnitude;
    };
    std::vector<Level> levels;

    for (std::size_t k = 1; k < curves.size(); ++k) {
        const PriceCurve& cur = curves[k];
        const PriceCurve& prev = curves[k - 1];
        const double t = T - cur.tau;
        const double dt = (T - cur.tau) - (T - prev.tau);
        if (!(dt > 0.0)) throw ValidationError("price curves must be ordered by increasing t");
        // t is recovered from tau, so compare with a relative roundoff margin.
        if (t < opt.t_min_fraction * T * (1.0 - 1e-12)) continue;

        Level L{cur.tau, dt, Eigen::VectorXd(hi - lo + 1), Eigen::VectorXd(hi - lo + 1)};
        const double growth = std::exp(m.r * t) * m.a * m.a;
        for (Eigen::Index i = lo; i <= hi; ++i) {
            const double S = cur.S[i];
            const double hl = cur.S[i] - cur.S[i - 1], hr = cur.S[i + 1] - cur.S[i];
            const double V = cur.V[i];
            const double V_S = (cur.V[i + 1] - cur.V[i - 1]) / (hl + hr);
            const double V_SS =
                2.0 * ((cur.V[i + 1] - V) / hr - (V - cur.V[i - 1]) / hl) / (hl + hr);
            const double V_tau = -(V - prev.V[i]) / dt;
            const double diffusion = 0.5 * s2 * (1.0 + growth * S * S * V_SS) * S * S * V_SS;
            const double advection = (m.r - m.q) * S * V_S;
            const double discount = -m.r * V;
            L.residual[i - lo] = V_tau + diffusion + advection + discount;
            L.magnitude[i - lo] = std::max({std::abs(V_tau), std::abs(diffusion),
                                            std::abs(advection), std::abs(discount)});
        }
        rep.scale = std::max(rep.scale, L.magnitude.maxCoeff());
        levels.push_back(std::move(L));
    }

    rep.scaled = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(levels.size()), hi - lo + 1);
    double l2 = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        rep.tau.push_back(levels[k].tau);
        if (rep.scale > 0.0) rep.scaled.row(static_cast<Eigen::Index>(k)) = levels[k].residual / rep.scale;
        for (Eigen::Index j = 0; j < rep.S.size(); ++j) {
            const Eigen::Index i = lo + j;
            const double w = 0.5 * (curves.front().S[i + 1] - curves.front().S[i - 1]);
            l2 += levels[k].dt * w * rep.scaled(static_cast<Eigen::Index>(k), j) *
                  rep.scaled(static_cast<Eigen::Index>(k), j);
        }
    }
    rep.max_scaled = rep.scaled.size() ? rep.scaled.cwiseAbs().maxCoeff() : 0.0;
    rep.l2_scaled = std::sqrt(l2);
    return rep;
}

double far_field_ratio(const PriceCurve& c, const MarketParams& m) {
    const double b = c.S[c.S.size() - 1];
    return c.V[c.V.size() - 1] / (b - m.K * std::exp(-m.r * (m.T - c.tau)));
}

double far_field_slope_deviation(const PriceCurve& c, Eigen::Index count) {
    const Eigen::VectorXd d = delta_from_price(c);
    const Eigen::Index n = d.size();
    double worst = 0.0;
    for (Eigen::Index i = std::max<Eigen::Index>(1, n - 1 - count); i < n - 1; ++i) {
        worst = std::max(worst, std::abs(d[i] - 1.0));
    }
    return worst;
}

}  // namespace nlbs
