#include "nlbs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nlbs/errors.hpp"

namespace nlbs {

GridKind parse_grid_kind(std::string_view name) {
    if (name == "uniform") return GridKind::uniform;
    if (name == "graded") return GridKind::graded;
    throw ValidationError("grid must be 'uniform' or 'graded', got '" + std::string(name) + "'",
                          "grid");
}

std::string_view to_string(GridKind kind) {
    return kind == GridKind::uniform ? "uniform" : "graded";
}

Grid make_uniform_grid(double b, std::size_t nx) {
    if (nx < 3) throw ValidationError("nx must be at least 3", "nx");
    if (!(b > 0.0)) throw ValidationError("b must be positive", "b");
    Grid g;
    g.kind = GridKind::uniform;
    g.x.resize(static_cast<Eigen::Index>(nx));
    const double n = static_cast<double>(nx - 1);
    for (Eigen::Index i = 0; i < g.x.size(); ++i) g.x[i] = b * static_cast<double>(i) / n;
    g.x[g.x.size() - 1] = b;
    return g;
}

namespace {

// Spacing profile leaving K: h_core out to distance `core`, then geometric
// growth by `ratio`, capped at h_cap.
std::vector<double> raw_spacings(double length, double core, double h_core, double h_cap, double ratio) {
    std::vector<double> h;
    double covered = 0.0, next = h_core;
    while (covered < length) {
        const double step = covered < core ? h_core : std::min(next *= ratio, h_cap);
        h.push_back(step);
        covered += step;
    }
    return h;
}

// Same profile rescaled to cover `length` exactly in m steps.
std::vector<double> side_spacings(double length, std::size_t m, double core, double h_core, double h_cap,
                                  double ratio) {
    std::vector<double> h = raw_spacings(length, core, h_core, h_cap, ratio);
    h.resize(m, h.empty() ? h_core : h.back());
    double sum = 0.0;
    for (double v : h) sum += v;
    for (double& v : h) v *= length / sum;
    return h;
}

Grid assemble(double b, double K, const std::vector<double>& left, const std::vector<double>& right) {
    Grid g;
    g.kind = GridKind::graded;
    g.x.resize(static_cast<Eigen::Index>(left.size() + right.size() + 1));
    const auto iK = static_cast<Eigen::Index>(left.size());
    g.x[iK] = K;
    double pos = K;
    for (std::size_t k = 0; k < left.size(); ++k) {
        pos -= left[k];
        g.x[iK - 1 - static_cast<Eigen::Index>(k)] = pos;
    }
    pos = K;
    for (std::size_t k = 0; k < right.size(); ++k) {
        pos += right[k];
        g.x[iK + 1 + static_cast<Eigen::Index>(k)] = pos;
    }
    g.x[0] = 0.0;
    g.x[g.x.size() - 1] = b;
    return g;
}

}  // namespace

Grid make_graded_grid(double b, double K, double eps, std::size_t nx, double ratio) {
    if (nx < 5) throw ValidationError("graded grid needs nx >= 5", "nx");
    if (!(ratio > 1.0)) throw ValidationError("grade_ratio must exceed 1", "grade_ratio");
    if (!(K > 0.0 && b > K)) throw ValidationError("graded grid needs 0 < K < b", "b");
    if (!(eps > 0.0)) throw ValidationError("eps must be positive", "eps");

    const std::size_t target = nx - 1;
    const double L_left = K, L_right = b - K;
    const double core = std::min({2.0 * eps, L_left, L_right});
    const double h_uniform = b / static_cast<double>(target);

    for (int mult = 2; mult <= 64; mult *= 2) {
        const double h_cap = mult * h_uniform;
        auto total = [&](double h_core) {
            return raw_spacings(L_left, core, h_core, h_cap, ratio).size() +
                   raw_spacings(L_right, core, h_core, h_cap, ratio).size();
        };
        // Total count is nonincreasing in h_core; bisect for the target.
        double lo = core / static_cast<double>(target), hi = h_cap;
        if (total(hi) > target || total(lo) < target) continue;
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (total(mid) >= target) lo = mid; else hi = mid;
        }
        const double h_core = lo;
        const std::size_t m_left =
            std::min(raw_spacings(L_left, core, h_core, h_cap, ratio).size(), target - 1);
        const std::size_t m_right = target - m_left;
        Grid g = assemble(b, K, side_spacings(L_left, m_left, core, h_core, h_cap, ratio),
                          side_spacings(L_right, m_right, core, h_core, h_cap, ratio));
        bool increasing = true;
        for (Eigen::Index i = 1; i < g.x.size(); ++i) increasing = increasing && g.x[i] > g.x[i - 1];
        if (increasing && node_fraction_in(g, K - 2 * eps, K + 2 * eps) >= 0.2) return g;
    }
    throw ValidationError("graded grid cannot place 20% of nodes in [K - 2eps, K + 2eps]", "nx");
}

double node_fraction_in(const Grid& grid, double lo, double hi) {
    const auto inside = (grid.x.array() >= lo && grid.x.array() <= hi).count();
    return static_cast<double>(inside) / static_cast<double>(grid.size());
}

Eigen::VectorXd restrict_to(const Grid& from, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& to) {
    Eigen::VectorXd out(to.size());
    const double* begin = from.x.data();
    const double* end = begin + from.x.size();
    for (Eigen::Index j = 0; j < to.size(); ++j) {
        const double xj = to[j];
        if (xj < from.x[0] || xj > from.b()) {
            throw std::domain_error("restriction target outside the source grid");
        }
        const double* it = std::upper_bound(begin, end, xj);
        Eigen::Index k = std::clamp<Eigen::Index>(it - begin, 1, from.last());
        const double x0 = from.x[k - 1], x1 = from.x[k];
        const double w = (xj - x0) / (x1 - x0);
        out[j] = (1.0 - w) * values[k - 1] + w * values[k];
    }
    return out;
}

}  // namespace nlbs
