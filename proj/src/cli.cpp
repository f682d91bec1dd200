#include "nlbs/cli.hpp"

#include <filesystem>
#include <ostream>

#include "nlbs/acceptance.hpp"
#include "nlbs/errors.hpp"
#include "nlbs/norms.hpp"
#include "nlbs/pricer.hpp"
#include "nlbs/psi_ode.hpp"
#include "nlbs/reports.hpp"

namespace nlbs {

namespace {

std::filesystem::path prepare_out(const RunConfig& c) {
    std::filesystem::create_directories(c.out_dir);
    return c.out_dir;
}

void say(const RunContext& ctx, const std::string& line) {
    if (ctx.log) *ctx.log << line << '\n';
}

}  // namespace

int run_psi(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    validate(c);
    PsiCertifyOptions po;
    po.integrator.tol = c.psi_tol;
    const PsiTable table = PsiTable::build(c.A_max, po.integrator);
    const std::vector<double> A = psi_probe_points(std::min(po.a_min, c.A_max), c.A_max, c.psi_n);
    const PsiCertificate cert = psi_certify(c.A_max, c.psi_n, po);

    const auto out = prepare_out(c);
    psi_csv(table, A).save(out / "psi.csv");
    psi_certificate_csv(cert).save(out / "psi_certify.csv");
    for (const auto& check : cert.checks) {
        say(ctx, std::string(check.pass ? "[PASS] " : "[FAIL] ") + check.name + " worst margin " +
                     format_number(check.worst_margin) + " at A = " + format_number(check.worst_at));
    }
    return cert.all_pass() ? exit_success : exit_acceptance;
}

int run_solve(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    validate(c);
    const Problem& p = c.problem;
    const Trajectory traj = solve(p);
    const std::vector<std::size_t> idx = traj.output_indices(p.solver.dt_out);
    const MonotonicityReport mono = monotonicity_report(traj);
    const std::vector<PriceCurve> curves = reconstruct_prices(traj, p.market.T);

    const auto out = prepare_out(c);
    snapshots_csv(traj, idx).save(out / "snapshots.csv");
    diagnostics_csv(traj).save(out / "diagnostics.csv");
    monotonicity_csv(traj, mono).save(out / "monotonicity.csv");
    price_csv(curves, idx).save(out / "price.csv");
    if (traj.snapshots.size() >= 2) {
        norms_csv(discrete_norms(traj, p.domain.b)).save(out / "norms.csv");
    }
    if (curves.size() >= 3) residual_csv(price_residual(curves, p.market)).save(out / "residual.csv");

    say(ctx, "steps " + std::to_string(traj.steps.size()) + ", halvings " +
                 std::to_string(traj.total_halvings()) + ", monotonicity flags " +
                 std::to_string(mono.flagged_count()));
    return exit_success;
}

int run_sweep(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    validate(c);
    SweepOptions so;
    so.threads = ctx.threads;
    const SweepResult s = epsilon_sweep(c.problem, c.eps_list, so);

    const auto out = prepare_out(c);
    sweep_csv(s).save(out / "sweep.csv");
    exponents_csv(s).save(out / "exponents.csv");
    cauchy_csv(s).save(out / "cauchy.csv");
    for (const auto& e : s.exponents) {
        say(ctx, std::string(e.pass ? "[PASS] " : "[FAIL] ") +
                     std::string(kNormSpecs[static_cast<std::size_t>(e.id)].name) + " p_measured " +
                     format_number(e.p_measured) + " bound " + format_number(e.p_bound));
    }
    return s.exponents_pass() ? exit_success : exit_acceptance;
}

int run_verify(const RunContext& ctx) {
    AcceptanceOptions opt;
    opt.config = ctx.config;
    opt.threads = ctx.threads;
    const AcceptanceReport rep = run_acceptance(opt, ctx.log);
    return rep.all_pass() ? exit_success : exit_acceptance;
}

int guarded(int (*run)(const RunContext&), const RunContext& ctx, std::ostream& err) {
    try {
        return run(ctx);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << '\n';
        return exit_solver;
    } catch (const IntegrationError& e) {
        err << "integration failure: " << e.what() << '\n';
        return exit_solver;
    }
}

}  // namespace nlbs
