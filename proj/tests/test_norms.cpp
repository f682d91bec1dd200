#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlbs/errors.hpp"
#include "nlbs/norms.hpp"
#include "nlbs/payoff.hpp"

using namespace nlbs;

namespace {

Trajectory frozen(const Grid& g, const Eigen::VectorXd& u, std::size_t levels, double T) {
    Trajectory t;
    t.grid = g;
    for (std::size_t n = 0; n < levels; ++n) {
        t.snapshots.push_back({u, T * static_cast<double>(n) / static_cast<double>(levels - 1)});
    }
    return t;
}

}  // namespace

TEST_CASE("shift to v") {
    const double b = 4.0;
    const Grid g = make_uniform_grid(b, 401);
    CHECK(shift_to_v(g.x, g.x / b, b).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::VectorXd u0 = smoothed_initial(g.x, 1.0, 0.05);
    const Eigen::VectorXd v0 = shift_to_v(g.x, u0, b);
    CHECK(v0[0] == 0.0);
    CHECK(v0[g.last()] == 0.0);
    for (Eigen::Index i = 0; i < g.size(); ++i) REQUIRE(v0[i] == u0[i] - g.x[i] / b);
}

TEST_CASE("zero v gives zero norms") {
    const double b = 4.0;
    const Grid g = make_uniform_grid(b, 201);
    const NormReport r = discrete_norms(frozen(g, g.x / b, 5, 0.5), b);
    for (std::size_t j = 0; j < kNormCount - 1; ++j) CHECK(r.values[j] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r[NormId::w_linf_linf] == doctest::Approx(1.0 / b));
}

TEST_CASE("single sine mode") {
    const double b = 1.0;
    const Grid g = make_uniform_grid(b, 2001);
    const Eigen::VectorXd u =
        g.x + g.x.unaryExpr([](double x) { return std::sin(std::numbers::pi * x); });
    const NormReport r = discrete_norms(frozen(g, u, 11, 1.0), b);
    CHECK(r[NormId::v_linf_l2] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(r[NormId::vx_l2_l2] == doctest::Approx(std::numbers::pi * std::sqrt(0.5)).epsilon(1e-5));
    CHECK(r[NormId::vx_linf_l2] == doctest::Approx(std::numbers::pi * std::sqrt(0.5)).epsilon(1e-5));
    CHECK(r[NormId::v_linf_linf] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r[NormId::vxx_l2_l2] == doctest::Approx(std::numbers::pi * std::numbers::pi * std::sqrt(0.5)).epsilon(1e-3));
    CHECK(r[NormId::vt_l2_l2] == 0.0);
}

TEST_CASE("quadrature converges at second order") {
    auto err = [](std::size_t nx) {
        const Grid g = make_uniform_grid(1.0, nx);
        const Eigen::VectorXd u =
            g.x + g.x.unaryExpr([](double x) { return std::sin(std::numbers::pi * x); });
        const NormReport r = discrete_norms(frozen(g, u, 2, 1.0), 1.0);
        return std::abs(r[NormId::vx_l2_l2] - std::numbers::pi * std::sqrt(0.5));
    };
    CHECK(std::log2(err(101) / err(201)) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("time derivative of a linearly growing mode") {
    const double b = 1.0;
    const Grid g = make_uniform_grid(b, 1001);
    Trajectory t;
    t.grid = g;
    const Eigen::VectorXd mode = g.x.unaryExpr([](double x) { return std::sin(std::numbers::pi * x); });
    for (int n = 0; n <= 10; ++n) t.snapshots.push_back({g.x + 0.1 * n * mode, 0.1 * n});
    const NormReport r = discrete_norms(t, b);
    CHECK(r[NormId::vt_l2_l2] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK_THROWS_AS(discrete_norms(frozen(g, g.x, 1, 0.0), b), ValidationError);
}

TEST_CASE("linear limit keeps v bounded by one") {
    Problem p;
    p.market.a = 0.0;
    p.reg.eps = 1e-3;
    p.grid.nx = 801;
    p.solver.nt = 500;
    const NormReport r = discrete_norms(solve(p), p.domain.b);
    CHECK(r[NormId::v_linf_linf] <= 1.0 + 1e-6);
    for (double v : r.values) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
}

TEST_CASE("norms are stable under restriction to every second node") {
    Problem p;
    p.reg.eps = 0.1;
    p.grid.nx = 1601;
    p.solver.nt = 200;
    const Trajectory t = solve(p);
    Trajectory half;
    half.grid.x.resize((t.grid.size() + 1) / 2);
    for (Eigen::Index i = 0; i < half.grid.x.size(); ++i) half.grid.x[i] = t.grid.x[2 * i];
    for (const auto& s : t.snapshots) {
        Eigen::VectorXd v(half.grid.x.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = s.values[2 * i];
        half.snapshots.push_back({v, s.time});
    }
    const NormReport full = discrete_norms(t, p.domain.b);
    const NormReport coarse = discrete_norms(half, p.domain.b);
    for (const auto& spec : kNormSpecs) {
        CAPTURE(spec.name);
        CHECK(std::abs(coarse[spec.id] - full[spec.id]) <= 0.05 * full[spec.id]);
    }
}

TEST_CASE("exponent fit") {
    const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
    std::vector<double> vals;
    for (double e : eps) vals.push_back(3.0 * std::pow(e, -1.5));
    CHECK(fit_exponent(eps, vals) == doctest::Approx(1.5).epsilon(1e-12));
    vals[0] = 1e6;  // ignored: only the last three points are fitted
    CHECK(fit_exponent(eps, vals, 3) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(fit_exponent(eps, vals, 4) != doctest::Approx(1.5));
    CHECK_THROWS_AS(fit_exponent({0.1}, {1.0}), ValidationError);
}

TEST_CASE("default sweep") {
    Problem base;
    const std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
    SweepOptions opt;
    opt.threads = 4;
    const SweepResult s = epsilon_sweep(base, eps_list, opt);
    REQUIRE(s.reports.size() == 4);
    CHECK(s.exponents.size() == 7);
    for (const auto& e : s.exponents) {
        CAPTURE(kNormSpecs[static_cast<std::size_t>(e.id)].name);
        CHECK(e.pass);
        CHECK(e.p_measured <= e.p_bound + kExponentSlack);
    }
    CHECK(s.exponents_pass());
    REQUIRE(s.cauchy.size() == 3);
    CHECK(s.cauchy_decreasing());
    CHECK(s.v0xx_exponent <= 2.1);

    SUBCASE("thread count does not change results") {
        opt.threads = 1;
        const SweepResult serial = epsilon_sweep(base, eps_list, opt);
        for (std::size_t k = 0; k < 4; ++k) CHECK(serial.reports[k].values == s.reports[k].values);
        CHECK(serial.cauchy == s.cauchy);
    }
}

TEST_CASE("sweep preconditions") {
    Problem base;
    CHECK_THROWS_AS(epsilon_sweep(base, {0.2, 0.1}), ValidationError);
    CHECK_THROWS_AS(epsilon_sweep(base, {0.2, 0.1, 0.1}), ValidationError);
    base.grid.nx = 101;
    try {
        epsilon_sweep(base, {0.2, 0.1, 0.05, 0.025});
        FAIL("under-resolved sweep accepted");
    } catch (const ValidationError& e) {
        CHECK(e.key() == "nx");
    }
}
