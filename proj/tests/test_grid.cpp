#include <doctest.h>

#include <stdexcept>

#include "nlbs/errors.hpp"
#include "nlbs/grid.hpp"

using namespace nlbs;

TEST_CASE("uniform grid") {
    const Grid g = make_uniform_grid(4.0, 1601);
    CHECK(g.size() == 1601);
    CHECK(g.x[0] == 0.0);
    CHECK(g.b() == 4.0);
    CHECK(g.x[400] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(make_uniform_grid(4.0, 2), ValidationError);
}

TEST_CASE("graded grid clusters nodes around the strike") {
    for (double eps : {0.1, 0.025, 0.01}) {
        CAPTURE(eps);
        const Grid g = make_graded_grid(4.0, 1.0, eps, 801, 1.05);
        CHECK(g.size() == 801);
        CHECK(g.x[0] == 0.0);
        CHECK(g.b() == 4.0);
        bool increasing = true, has_K = false;
        for (Eigen::Index i = 1; i < g.size(); ++i) increasing = increasing && g.x[i] > g.x[i - 1];
        for (Eigen::Index i = 0; i < g.size(); ++i) has_K = has_K || g.x[i] == 1.0;
        CHECK(increasing);
        CHECK(has_K);
        CHECK(node_fraction_in(g, 1.0 - 2 * eps, 1.0 + 2 * eps) >= 0.2);
    }
    CHECK_THROWS_AS(make_graded_grid(4.0, 1.0, 0.05, 801, 1.0), ValidationError);
}

TEST_CASE("grid kind names") {
    CHECK(parse_grid_kind("uniform") == GridKind::uniform);
    CHECK(parse_grid_kind("graded") == GridKind::graded);
    CHECK(to_string(GridKind::graded) == "graded");
    CHECK_THROWS_AS(parse_grid_kind("chebyshev"), ValidationError);
}

TEST_CASE("restriction is exact for linear data") {
    const Grid fine = make_graded_grid(4.0, 1.0, 0.05, 401, 1.05);
    const Grid coarse = make_uniform_grid(4.0, 97);
    const Eigen::VectorXd f = 3.0 * fine.x.array() - 1.0;
    const Eigen::VectorXd r = restrict_to(fine, f, coarse.x);
    CHECK((r.array() - (3.0 * coarse.x.array() - 1.0)).abs().maxCoeff() <= 1e-13);
    Eigen::VectorXd outside(1);
    outside << 4.5;
    CHECK_THROWS_AS(restrict_to(fine, f, outside), std::domain_error);
}
