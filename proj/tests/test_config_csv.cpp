#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "nlbs/config.hpp"
#include "nlbs/csv.hpp"
#include "nlbs/errors.hpp"
#include "nlbs/reports.hpp"

using namespace nlbs;

namespace {

std::string error_key(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ValidationError& e) {
        return e.key();
    }
    return "<none>";
}

}  // namespace

TEST_CASE("defaults and overrides") {
    const RunConfig d = parse_config("");
    CHECK(d.problem.market.sigma == 0.2);
    CHECK(d.problem.grid.nx == 1601);
    CHECK(d.eps_list == std::vector<double>{0.2, 0.1, 0.05, 0.025});
    CHECK(d.A_max == 50.0);

    const RunConfig c = parse_config(
        "# benchmark\n"
        "sigma = 0.3   # volatility\n"
        "\n"
        "  a=0\n"
        "grid = graded\r\n"
        "eps_list = 0.4, 0.2,0.1\n"
        "nx = 801\n"
        "out_dir = results/run1\n");
    CHECK(c.problem.market.sigma == 0.3);
    CHECK(c.problem.market.a == 0.0);
    CHECK(c.problem.grid.kind == GridKind::graded);
    CHECK(c.eps_list == std::vector<double>{0.4, 0.2, 0.1});
    CHECK(c.problem.grid.nx == 801);
    CHECK(c.out_dir == "results/run1");
}

TEST_CASE("errors name the key") {
    CHECK(error_key("volatility = 0.2\n") == "volatility");
    CHECK(error_key("sigma = abc\n") == "sigma");
    CHECK(error_key("sigma = 0.2x\n") == "sigma");
    CHECK(error_key("sigma = -0.2\n") == "sigma");
    CHECK(error_key("nx = 12.5\n") == "nx");
    CHECK(error_key("nx = -3\n") == "nx");
    CHECK(error_key("nt\n") == "nt");
    CHECK(error_key("T =\n") == "T");
    CHECK(error_key("r = 0.1\nr = 0.2\n") == "r");
    CHECK(error_key("grid = chebyshev\n") == "grid");
    CHECK(error_key("eps_list = 0.2, 0.1\n") == "eps_list");
    CHECK(error_key("eps_list = 0.1, 0.2, 0.05\n") == "eps_list");
    CHECK(error_key("eps = 1.5\n") == "eps");
    CHECK(error_key("eps_smooth = -1\n") == "eps_smooth");
    CHECK(error_key("A_max = 0\n") == "A_max");
    CHECK(error_key("oracle_tol = 0\n") == "oracle_tol");
    CHECK(error_key("T = 0\n") == "<none>");
}

TEST_CASE("config text round trip") {
    RunConfig c;
    c.problem.market.sigma = 0.123456789012345678;
    c.problem.reg.eps = 1e-3;
    c.problem.grid.kind = GridKind::graded;
    c.eps_list = {0.3, 0.1, 1.0 / 30.0};
    c.psi_n = 77;
    const RunConfig back = parse_config(to_config_text(c));
    CHECK(to_config_text(back) == to_config_text(c));
    CHECK(back.problem.market.sigma == c.problem.market.sigma);
    CHECK(back.eps_list == c.eps_list);
    CHECK(config_keys().size() == 22);
}

TEST_CASE("shipped configs load") {
    const std::filesystem::path dir = NLBS_CONFIG_DIR;
    CHECK(to_config_text(load_config(dir / "default.cfg")) == to_config_text(RunConfig{}));
    const RunConfig graded = load_config(dir / "graded.cfg");
    CHECK(graded.problem.grid.kind == GridKind::graded);
    CHECK_NOTHROW(validate(graded));
}

TEST_CASE("missing config file") {
    CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), ValidationError);
}

TEST_CASE("numbers survive a text round trip") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CsvTable t({"a", "b"});
    std::vector<double> values;
    for (int k = 0; k < 1000; ++k) {
        const double v = u(rng) * std::pow(10.0, 20.0 * u(rng));
        values.push_back(v);
        t.add_row({format_number(v), format_number(static_cast<std::size_t>(k))});
    }
    const CsvTable back = CsvTable::parse(t.to_string());
    CHECK(back.header() == t.header());
    CHECK(back.numbers("a") == values);
    CHECK(back.to_string() == t.to_string());
    CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("table shape errors") {
    CsvTable t({"x", "y"});
    CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
    CHECK_THROWS_AS(t.column_index("z"), std::out_of_range);
    t.add_row({"1", "oops"});
    CHECK_THROWS_AS(t.numbers("y"), std::invalid_argument);
    CHECK_THROWS_AS(CsvTable::parse("a,b\n1,2,3\n"), std::invalid_argument);
    CHECK_THROWS_AS(CsvTable::parse(""), std::invalid_argument);
}

TEST_CASE("emitted files round trip through the reader") {
    const auto dir = std::filesystem::temp_directory_path() / "nlbs_csv_test";
    std::filesystem::create_directories(dir);

    const PsiTable table = PsiTable::build(50.0);
    const std::vector<double> A = psi_probe_points(1e-6, 50.0, 20);
    psi_csv(table, A).save(dir / "psi.csv");
    const CsvTable psi = CsvTable::load(dir / "psi.csv");
    CHECK(psi.header() == std::vector<std::string>{"A", "psi"});
    const auto a = psi.numbers("A");
    const auto v = psi.numbers("psi");
    REQUIRE(a.size() == 41);
    CHECK(a[20] == 0.0);
    CHECK(v[20] == 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(v[i] == table(a[i]));

    Problem p;
    p.grid.nx = 101;
    p.solver.nt = 20;
    const Trajectory traj = solve(p);
    const auto idx = traj.output_indices(0.1);
    snapshots_csv(traj, idx).save(dir / "snapshots.csv");
    const CsvTable snaps = CsvTable::load(dir / "snapshots.csv");
    CHECK(snaps.header() == std::vector<std::string>{"t", "x", "u"});
    REQUIRE(snaps.size() == idx.size() * 101);
    const auto u = snaps.numbers("u");
    CHECK(u[101 * (idx.size() - 1) + 50] == traj.final().values[50]);

    const CsvTable norms = norms_csv(discrete_norms(traj, p.domain.b));
    CHECK(norms.size() == 7);
    CHECK(norms.column("norm_name").front() == "v_Linf_L2");
    std::filesystem::remove_all(dir);
}
