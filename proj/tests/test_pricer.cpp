#include <doctest.h>

#include <cmath>

#include "nlbs/errors.hpp"
#include "nlbs/payoff.hpp"
#include "nlbs/pricer.hpp"

using namespace nlbs;

TEST_CASE("step data integrate to the call payoff") {
    const double K = 1.0, T = 0.5;
    const Grid g = make_uniform_grid(4.0, 401);
    const Eigen::VectorXd u = g.x.unaryExpr([K](double x) { return u0_step(x, K); });
    const PriceCurve c = reconstruct_price(g, {u, 0.0}, T);
    CHECK(c.tau == T);
    const double h = g.x[1] - g.x[0];
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double S = g.x[i];
        if (S == K) {
            // half-value node: trapezoid of the jump
            CHECK(c.V[i] == doctest::Approx(h / 4));
        } else {
            REQUIRE(c.V[i] == doctest::Approx(std::max(S - K, 0.0)).epsilon(1e-13));
        }
    }
}

TEST_CASE("constant fields") {
    const Grid g = make_graded_grid(4.0, 1.0, 0.05, 201, 1.05);
    const PriceCurve zero = reconstruct_price(g, {Eigen::VectorXd::Zero(g.size()), 0.1}, 0.5);
    CHECK(zero.V.cwiseAbs().maxCoeff() == 0.0);
    const PriceCurve one = reconstruct_price(g, {Eigen::VectorXd::Ones(g.size()), 0.1}, 0.5);
    CHECK((one.V - g.x).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(one.tau == doctest::Approx(0.4));
}

TEST_CASE("closed-form Delta") {
    MarketParams m;
    m.a = 0.0;
    CHECK(linear_delta_oracle(1.0, 0.5, m) == doctest::Approx(0.664313379729563713819).epsilon(1e-12));
    CHECK(linear_delta_oracle(1.0, 1e-14, m) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(linear_delta_oracle(1.0, 0.0, m) == 0.5);
    CHECK(linear_delta_oracle(0.5, 0.0, m) == 0.0);
    m.q = 0.05;
    CHECK(linear_delta_oracle(1e3, 0.5, m) == doctest::Approx(std::exp(-0.025)).epsilon(1e-14));
    CHECK(linear_delta_oracle(0.0, 0.5, m) == 0.0);
}

TEST_CASE("differencing the price recovers the Delta") {
    MarketParams m;
    const Grid g = make_uniform_grid(4.0, 801);
    const Eigen::VectorXd u = linear_delta_oracle(g.x, 0.3, m);
    const PriceCurve c = reconstruct_price(g, {u, 0.3}, m.T);
    const Eigen::VectorXd d = delta_from_price(c);
    const double h = g.x[1] - g.x[0];
    CHECK((d - u).segment(1, g.size() - 2).cwiseAbs().maxCoeff() <= 5 * h);
}

TEST_CASE("residual of the exact linear price is differencing error only") {
    MarketParams m;
    m.a = 0.0;
    const Grid g = make_uniform_grid(4.0, 801);
    std::vector<PriceCurve> curves;
    const int nt = 500;
    for (int n = 0; n <= nt; ++n) {
        const double t = m.T * n / nt;
        Eigen::VectorXd u = linear_delta_oracle(g.x, t, m);
        u[g.last()] = 1.0;
        curves.push_back(reconstruct_price(g, {u, t}, m.T));
    }
    const ResidualReport r = price_residual(curves, m);
    CHECK(r.max_scaled <= 1e-2);
    CHECK(r.tau.front() == doctest::Approx(m.T - 0.05).epsilon(1e-12));
    CHECK(r.S.size() == g.size() - 10);
}

TEST_CASE("zero price has zero residual") {
    MarketParams m;
    const Grid g = make_uniform_grid(4.0, 101);
    std::vector<PriceCurve> curves;
    for (int n = 0; n <= 10; ++n) {
        curves.push_back(reconstruct_price(g, {Eigen::VectorXd::Zero(g.size()), 0.05 * n}, m.T));
    }
    const ResidualReport r = price_residual(curves, m);
    CHECK(r.max_scaled == 0.0);
    CHECK(r.l2_scaled == 0.0);
    CHECK_THROWS_AS(price_residual({curves[0], curves[1]}, m), ValidationError);
}

TEST_CASE("solved linear limit passes the price checks") {
    Problem p;
    p.market.a = 0.0;
    p.reg.eps = 1e-3;
    p.grid.nx = 801;
    p.solver.nt = 500;
    const Trajectory t = solve(p);
    const auto curves = reconstruct_prices(t, p.market.T);
    REQUIRE(curves.size() == t.snapshots.size());
    CHECK(curves.front().tau == p.market.T);
    CHECK(curves.back().tau == 0.0);
    const ResidualReport r = price_residual(curves, p.market);
    CHECK(r.max_scaled <= 5e-2);
    for (const auto& c : curves) {
        REQUIRE(c.V[0] == 0.0);
        REQUIRE(far_field_slope_deviation(c) <= 1e-2);
        REQUIRE(std::abs(far_field_ratio(c, p.market) - 1.0) <= 1e-2);
    }
}

TEST_CASE("nonlinear benchmark boundary behaviour") {
    Problem p;
    p.grid.nx = 801;
    p.solver.nt = 250;
    const Trajectory t = solve(p);
    for (const auto& c : reconstruct_prices(t, p.market.T)) {
        REQUIRE(c.V[0] == 0.0);
        REQUIRE(far_field_slope_deviation(c) <= 1e-2);
        REQUIRE(std::abs(far_field_ratio(c, p.market) - 1.0) <= 1e-2);
        // V nondecreasing since u >= 0, up to roundoff in u
        REQUIRE((c.V.tail(c.V.size() - 1) - c.V.head(c.V.size() - 1)).minCoeff() >= -1e-15);
    }
}
