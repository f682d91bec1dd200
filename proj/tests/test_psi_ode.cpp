#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "nlbs/errors.hpp"
#include "nlbs/psi_ode.hpp"

using namespace nlbs;

namespace {

const double kC = std::cbrt(2.25);

// Reference solution: Fehlberg 7(8) in the variable A itself, started very
// close to the origin from the two-term local expansion.
double odeint_psi(double A, double tol = 1e-12) {
    namespace odeint = boost::numeric::odeint;
    using State = std::vector<double>;
    const double sign = A > 0 ? 1.0 : -1.0;
    const double a0 = 1e-14;
    const double k = 0.4 * (kC + 0.5 / std::sqrt(kC));
    const double c = std::cbrt(a0);
    State y{sign * kC * c + kC * k * c * c};
    auto rhs = [sign](const State& s, State& dsdA, double a) {
        const double A_ = sign * a;
        const double root = std::sqrt(std::max(0.0, A_ * s[0]));
        dsdA[0] = sign * (s[0] + 1.0) / (2.0 * root - A_);
    };
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_adaptive(stepper, rhs, y, a0, std::abs(A), 1e-16);
    return y[0];
}

double residual(double A, double psi, double dpsi) {
    return dpsi * (2.0 * std::sqrt(std::max(0.0, A * psi)) - A) - (psi + 1.0);
}

}  // namespace

TEST_CASE("seed matches the cube-root balance") {
    CHECK(psi_seed(0.0) == 0.0);
    CHECK(psi_seed(1e-6) == doctest::Approx(0.013104).epsilon(1e-4));
    CHECK(psi_seed(-1e-6) == doctest::Approx(-0.013104).epsilon(1e-4));
    CHECK(psi_seed(1e-6) == doctest::Approx(kC * 1e-2).epsilon(1e-14));
}

TEST_CASE("relative ODE residual of the seed shrinks toward the origin") {
    for (double sign : {1.0, -1.0}) {
        double previous = INFINITY;
        for (double a : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
            const double A = sign * a;
            const double psi = psi_seed(A);
            const double dpsi = psi / (3.0 * A);
            const double rel = std::abs(residual(A, psi, dpsi)) / (psi + 1.0);
            CHECK(rel < previous);
            previous = rel;
        }
        CHECK(previous < 1e-2);
    }
}

TEST_CASE("local expansion beats the leading-order seed") {
    for (double A : {1e-6, -1e-6, 1e-4, -1e-4}) {
        const double ref = odeint_psi(A);
        CHECK(std::abs(psi_local(A) - ref) < 0.1 * std::abs(psi_seed(A) - ref));
    }
}

TEST_CASE("psi_eval reference values") {
    CHECK(psi_eval(0.0, 1e-9) == 0.0);
    const double far = psi_eval(1e4, 1e-9);
    CHECK(std::abs(far / 1e4 - 1.0) <= 0.05);
    const double neg = psi_eval(-1e4, 1e-9);
    CHECK(neg > -1.0);
    CHECK(neg <= -0.95);
    CHECK(psi_eval(1.0, 1e-9) <= 3.72);
    CHECK_THROWS_AS(psi_eval(1.0, 0.0), ValidationError);
}

TEST_CASE("two independent integrators agree") {
    const PsiTable table = PsiTable::build(1e4);
    for (double A : {1e4, 1e3, 100.0, 10.0, 1.0, 0.1, 1e-3, 1e-6, -1e-6, -1e-3, -0.1, -1.0, -10.0,
                     -100.0, -1e3, -1e4}) {
        const double ref = odeint_psi(A);
        CAPTURE(A);
        CHECK(std::abs(table(A) - ref) <= 1e-6 * std::abs(ref));
        CHECK(std::abs(table(A) - ref) <= 5e-9 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("tightening the tolerance tenfold moves values by at most 5 tol") {
    const double tol = 1e-8;
    PsiOptions loose, tight;
    loose.tol = tol;
    tight.tol = tol / 10;
    const PsiTable a = PsiTable::build(1e4, loose);
    const PsiTable b = PsiTable::build(1e4, tight);
    for (double A : psi_probe_points(1e-6, 1e4, 200)) {
        CAPTURE(A);
        CHECK(std::abs(a(A) - b(A)) <= 5 * tol * std::max(1.0, std::abs(b(A))));
    }
}

TEST_CASE("finite-difference ODE residual at table nodes") {
    PsiOptions opt;
    opt.max_log_step = 1e-4;
    const PsiTable table = PsiTable::build(100.0, opt);
    const auto A = table.nodes();
    const auto P = table.values();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < A.size(); ++i) {
        if (A[i - 1] <= 0.0 && A[i + 1] >= 0.0) continue;  // stencil straddles the origin
        if (std::abs(A[i]) <= 1e-7) continue;              // seed region, O(|A|^(2/3)) spacing effects
        const double hl = A[i] - A[i - 1], hr = A[i + 1] - A[i];
        const double d = (P[i + 1] - P[i]) * hl / (hr * (hl + hr)) +
                         (P[i] - P[i - 1]) * hr / (hl * (hl + hr));
        worst = std::max(worst, std::abs(residual(A[i], P[i], d)) / (1.0 + std::abs(P[i])));
    }
    CHECK(worst <= 10 * opt.tol);
}

TEST_CASE("table invariants") {
    const PsiTable table = PsiTable::build(50.0);
    const auto A = table.nodes();
    const auto P = table.values();
    bool ordered = true, monotone = true, brackets = true;
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (i > 0) {
            ordered = ordered && A[i] > A[i - 1];
            monotone = monotone && P[i] >= P[i - 1];
        }
        if (A[i] > 0) brackets = brackets && P[i] >= 0.0;
        if (A[i] < 0) brackets = brackets && P[i] > -1.0 && P[i] <= 0.0;
    }
    CHECK(ordered);
    CHECK(monotone);
    CHECK(brackets);
    CHECK(table(0.0) == 0.0);
    CHECK(A.front() == -50.0);
    CHECK(A.back() == 50.0);
    CHECK_THROWS_AS(table(50.5), std::domain_error);
    CHECK_THROWS_AS(PsiTable::build(1e-9), ValidationError);
}

TEST_CASE("interpolant stays monotone between nodes") {
    const PsiTable table = PsiTable::build(100.0);
    double prev = table(-100.0);
    for (int i = 1; i <= 200000; ++i) {
        const double A = -100.0 + 200.0 * i / 200000.0;
        const double v = table(A);
        REQUIRE(v >= prev);
        prev = v;
    }
}

TEST_CASE("certification on the standard probe set") {
    const PsiCertificate cert = psi_certify(100.0, 10000);
    REQUIRE(cert.checks.size() == 4);
    for (const auto& c : cert.checks) {
        CAPTURE(c.name);
        CHECK(c.pass);
        CHECK(c.worst_margin >= 0.0);
    }
    CHECK(cert.all_pass());
}

TEST_CASE("certification preconditions") {
    CHECK_THROWS_AS(psi_certify(0.0, 100), ValidationError);
    CHECK_THROWS_AS(psi_certify(-1.0, 100), ValidationError);
    CHECK_THROWS_AS(psi_certify(10.0, 1), ValidationError);
}

TEST_CASE("a wrong linear bound is reported with its worst point") {
    PsiCertifyOptions opt;
    opt.linear_offset = 2.0;
    const PsiCertificate cert = psi_certify(100.0, 1000, opt);
    CHECK_FALSE(cert.all_pass());
    const auto& bound = cert.checks.back();
    CHECK(bound.name == "linear_upper_bound");
    CHECK_FALSE(bound.pass);
    CHECK(bound.worst_margin < 0.0);
    CHECK(bound.worst_at > 0.0);
}
