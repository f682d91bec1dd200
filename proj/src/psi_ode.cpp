#include "nlbs/psi_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlbs/errors.hpp"

namespace nlbs {

namespace {

// (3/2)^(2/3): balances Psi' ~ 1/(2 sqrt(c) |A|^(2/3)) against d/dA (c |A|^(1/3)).
const double kSeedCoefficient = std::cbrt(1.5 * 1.5);
// Next order: Psi = c A^(1/3) (1 + k A^(1/3)), k = (2/5) (c + 1 / (2 sqrt c)).
const double kLocalCorrection = 0.4 * (kSeedCoefficient + 0.5 / std::sqrt(kSeedCoefficient));

struct SideSolution {
    std::vector<double> a;
    std::vector<double> psi;
    std::size_t rhs_evals = 0;
};

// Dormand-Prince 5(4) in s = log|A| for y = Psi, dy/ds = A Psi'(A).
SideSolution integrate_side(double sign, double a_max, const PsiOptions& opt) {
    SideSolution out;
    const double s_end = std::log(a_max);
    double s = std::log(opt.seed_radius);
    double y = psi_local(sign * opt.seed_radius);

    auto f = [&](double s_, double y_) {
        ++out.rhs_evals;
        const double A = sign * std::exp(s_);
        return A * psi_rhs(A, y_);
    };

    out.a.push_back(sign * opt.seed_radius);
    out.psi.push_back(y);

    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double h = std::min(opt.max_log_step, 1e-3);
    double k1 = f(s, y);
    while (s < s_end) {
        h = std::min({h, opt.max_log_step, s_end - s});
        if (h <= 1e-14 * std::max(1.0, std::abs(s))) {
            throw IntegrationError("psi integrator step underflow near A = " +
                                   std::to_string(sign * std::exp(s)));
        }
        const double k2 = f(s + c2 * h, y + h * a21 * k1);
        const double k3 = f(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const double k4 = f(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = f(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 =
            f(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double k7 = f(s + h, y_new);
        const double err_abs =
            std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
        const double scale = opt.tol * (1.0 + std::max(std::abs(y), std::abs(y_new)));
        const double err = err_abs / scale;

        if (!std::isfinite(err)) {
            h *= 0.25;
            continue;
        }
        if (err <= 1.0) {
            s += h;
            y = y_new;
            k1 = k7;  // FSAL
            out.a.push_back(sign * std::exp(s));
            out.psi.push_back(y);
        }
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
    }
    // land exactly on a_max
    out.a.back() = sign * a_max;
    return out;
}

}  // namespace

double psi_rhs(double A, double psi) {
    if (A == 0.0) return std::numeric_limits<double>::infinity();
    const double root = std::sqrt(std::max(0.0, A * psi));
    return (psi + 1.0) / (2.0 * root - A);
}

double psi_seed(double A) {
    if (A == 0.0) return 0.0;
    return std::copysign(kSeedCoefficient * std::cbrt(std::abs(A)), A);
}

double psi_local(double A) {
    const double lead = psi_seed(A);
    return lead + kLocalCorrection * std::abs(lead) * std::cbrt(std::abs(A));
}

PsiTable PsiTable::build(double a_max, const PsiOptions& options) {
    if (!(options.seed_radius > 0.0)) {
        throw ValidationError("psi seed radius must be positive", "seed_radius");
    }
    if (!(a_max > options.seed_radius)) {
        throw ValidationError("psi table range must exceed the seed radius", "A_max");
    }
    if (!(options.tol > 0.0)) throw ValidationError("psi tolerance must be positive", "psi_tol");
    if (!(options.max_log_step > 0.0)) {
        throw ValidationError("psi max log step must be positive", "max_log_step");
    }

    const SideSolution neg = integrate_side(-1.0, a_max, options);
    const SideSolution pos = integrate_side(+1.0, a_max, options);

    PsiTable table;
    table.a_max_ = a_max;
    table.seed_radius_ = options.seed_radius;
    table.tol_ = options.tol;
    table.rhs_evals_ = neg.rhs_evals + pos.rhs_evals;

    const std::size_t n = neg.a.size() + pos.a.size() + 1;
    table.a_.reserve(n);
    table.psi_.reserve(n);
    for (std::size_t i = neg.a.size(); i-- > 0;) {
        table.a_.push_back(neg.a[i]);
        table.psi_.push_back(neg.psi[i]);
    }
    table.a_.push_back(0.0);
    table.psi_.push_back(0.0);
    table.a_.insert(table.a_.end(), pos.a.begin(), pos.a.end());
    table.psi_.insert(table.psi_.end(), pos.psi.begin(), pos.psi.end());

    table.slope_.resize(table.a_.size());
    for (std::size_t i = 0; i < table.a_.size(); ++i) {
        table.slope_[i] = psi_rhs(table.a_[i], table.psi_[i]);
    }
    return table;
}

double PsiTable::operator()(double A) const {
    if (!(std::abs(A) <= a_max_)) {
        throw std::domain_error("A outside the cached psi table range");
    }
    if (std::abs(A) <= seed_radius_) return psi_local(A);

    // First node strictly greater than A; the seed branch above keeps the
    // bracketing interval away from the A = 0 node.
    const auto it = std::upper_bound(a_.begin(), a_.end(), A);
    std::size_t k = static_cast<std::size_t>(std::distance(a_.begin(), it));
    k = std::clamp<std::size_t>(k, 1, a_.size() - 1);
    const std::size_t i = k - 1;

    const double x0 = a_[i], x1 = a_[k];
    const double y0 = psi_[i], y1 = psi_[k];
    const double h = x1 - x0;
    const double delta = (y1 - y0) / h;
    double m0 = slope_[i], m1 = slope_[k];
    if (delta <= 0.0) {
        m0 = m1 = 0.0;
    } else {
        const double alpha = m0 / delta, beta = m1 / delta;
        const double r2 = alpha * alpha + beta * beta;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            m0 = tau * alpha * delta;
            m1 = tau * beta * delta;
        }
    }
    const double t = (A - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
}

double psi_eval(double A, double tol) {
    if (!(tol > 0.0)) throw ValidationError("psi tolerance must be positive", "psi_tol");
    if (A == 0.0) return 0.0;
    PsiOptions opt;
    opt.tol = tol;
    if (std::abs(A) <= opt.seed_radius) return psi_local(A);
    return PsiTable::build(std::abs(A), opt)(A);
}

bool PsiCertificate::all_pass() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.pass; });
}

std::vector<double> psi_probe_points(double a_min, double a_max, std::size_t n) {
    const double lo = std::min(a_min, a_max / 10.0);
    const double log_lo = std::log(lo), log_hi = std::log(a_max);
    std::vector<double> pos(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        pos[i] = std::exp(log_lo + w * (log_hi - log_lo));
    }
    pos.back() = a_max;
    std::vector<double> out;
    out.reserve(2 * n + 1);
    for (std::size_t i = n; i-- > 0;) out.push_back(-pos[i]);
    out.push_back(0.0);
    out.insert(out.end(), pos.begin(), pos.end());
    return out;
}

PsiCertificate psi_certify(double a_max, std::size_t n, const PsiCertifyOptions& options) {
    if (!(a_max > 0.0)) throw ValidationError("A_max must be positive", "A_max");
    if (n < 2) throw ValidationError("psi certification needs at least 2 nodes per sign", "psi_n");

    const PsiTable table =
        PsiTable::build(std::max(a_max, options.a_far), options.integrator);
    const std::vector<double> probes = psi_probe_points(options.a_min, a_max, n);
    std::vector<double> values(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) values[i] = table(probes[i]);

    auto track = [](LemmaCheck& c, double margin, double at) {
        if (margin < c.worst_margin) {
            c.worst_margin = margin;
            c.worst_at = at;
        }
    };
    const double inf = std::numeric_limits<double>::infinity();

    PsiCertificate cert;

    LemmaCheck asym{"asymptotic_limits", false, inf, 0.0};
    const double far_pos = table(options.a_far);
    const double far_neg = table(-options.a_far);
    track(asym, 0.05 - std::abs(far_pos / options.a_far - 1.0), options.a_far);
    track(asym, far_neg + 1.0, -options.a_far);
    track(asym, -0.95 - far_neg, -options.a_far);
    asym.pass = asym.worst_margin >= 0.0 && far_neg > -1.0;
    cert.checks.push_back(asym);

    LemmaCheck sign{"sign_brackets", false, inf, 0.0};
    bool strict_ok = true;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const double A = probes[i], p = values[i];
        if (A > 0.0) {
            track(sign, p, A);
        } else if (A < 0.0) {
            track(sign, -p, A);
            track(sign, p + 1.0, A);
            strict_ok = strict_ok && p > -1.0;
        } else {
            track(sign, p == 0.0 ? 0.0 : -std::abs(p), A);
        }
    }
    sign.pass = sign.worst_margin >= 0.0 && strict_ok;
    cert.checks.push_back(sign);

    LemmaCheck mono{"nondecreasing", false, inf, 0.0};
    for (std::size_t i = 1; i < probes.size(); ++i) {
        track(mono, values[i] - values[i - 1], probes[i]);
    }
    mono.pass = mono.worst_margin >= 0.0;
    cert.checks.push_back(mono);

    LemmaCheck bound{"linear_upper_bound", false, inf, 0.0};
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (probes[i] < 0.0) continue;
        track(bound, options.linear_slope * probes[i] + options.linear_offset - values[i],
              probes[i]);
    }
    bound.pass = bound.worst_margin >= 0.0;
    cert.checks.push_back(bound);

    return cert;
}

}  // namespace nlbs
