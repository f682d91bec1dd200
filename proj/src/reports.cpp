#include "nlbs/reports.hpp"

#include <string>

namespace nlbs {

CsvTable psi_csv(const PsiTable& table, const std::vector<double>& A) {
    CsvTable t({"A", "psi"});
    for (double a : A) t.add_row({format_number(a), format_number(table(a))});
    return t;
}

CsvTable psi_certificate_csv(const PsiCertificate& cert) {
    CsvTable t({"check", "pass", "worst_margin", "worst_at"});
    for (const auto& c : cert.checks) {
        t.add_row({c.name, format_bool(c.pass), format_number(c.worst_margin), format_number(c.worst_at)});
    }
    return t;
}

CsvTable snapshots_csv(const Trajectory& traj, const std::vector<std::size_t>& indices) {
    CsvTable t({"t", "x", "u"});
    for (std::size_t k : indices) {
        const auto& s = traj.snapshots.at(k);
        const std::string time = format_number(s.time);
        for (Eigen::Index i = 0; i < traj.grid.size(); ++i) {
            t.add_row({time, format_number(traj.grid.x[i]), format_number(s.values[i])});
        }
    }
    return t;
}

CsvTable diagnostics_csv(const Trajectory& traj) {
    CsvTable t({"t", "dt", "substeps", "halvings", "newton_iterations", "picard_iterations", "residual",
                "min_forward_difference"});
    for (const auto& d : traj.steps) {
        t.add_row({format_number(d.time), format_number(d.dt), std::to_string(d.substeps),
                   std::to_string(d.halvings), std::to_string(d.newton_iterations),
                   std::to_string(d.picard_iterations), format_number(d.residual),
                   format_number(d.min_forward_difference)});
    }
    return t;
}

CsvTable monotonicity_csv(const Trajectory& traj, const MonotonicityReport& report) {
    CsvTable t({"t", "min_forward_difference", "x", "flagged"});
    for (const auto& s : report.snapshots) {
        t.add_row({format_number(s.time), format_number(s.min_forward_difference),
                   format_number(traj.grid.x[s.location]), format_bool(s.flagged)});
    }
    return t;
}

CsvTable norms_csv(const NormReport& report) {
    CsvTable t({"norm_name", "value"});
    for (const auto& spec : kNormSpecs) {
        t.add_row({std::string(spec.name), format_number(report[spec.id])});
    }
    return t;
}

CsvTable price_csv(const std::vector<PriceCurve>& curves, const std::vector<std::size_t>& indices) {
    CsvTable t({"tau", "S", "V"});
    for (std::size_t k : indices) {
        const auto& c = curves.at(k);
        const std::string tau = format_number(c.tau);
        for (Eigen::Index i = 0; i < c.S.size(); ++i) {
            t.add_row({tau, format_number(c.S[i]), format_number(c.V[i])});
        }
    }
    return t;
}

CsvTable residual_csv(const ResidualReport& report) {
    CsvTable t({"tau", "S", "residual_scaled"});
    for (std::size_t k = 0; k < report.tau.size(); ++k) {
        const std::string tau = format_number(report.tau[k]);
        for (Eigen::Index j = 0; j < report.S.size(); ++j) {
            t.add_row({tau, format_number(report.S[j]),
                       format_number(report.scaled(static_cast<Eigen::Index>(k), j))});
        }
    }
    return t;
}

CsvTable sweep_csv(const SweepResult& sweep) {
    CsvTable t({"eps", "norm_name", "value"});
    for (const auto& r : sweep.reports) {
        for (const auto& spec : kNormSpecs) {
            t.add_row({format_number(r.eps), std::string(spec.name), format_number(r[spec.id])});
        }
    }
    return t;
}

CsvTable exponents_csv(const SweepResult& sweep) {
    CsvTable t({"norm_name", "p_measured", "p_bound", "pass"});
    for (const auto& e : sweep.exponents) {
        t.add_row({std::string(kNormSpecs[static_cast<std::size_t>(e.id)].name), format_number(e.p_measured),
                   format_number(e.p_bound), format_bool(e.pass)});
    }
    return t;
}

CsvTable cauchy_csv(const SweepResult& sweep) {
    CsvTable t({"eps_coarse", "eps_fine", "delta"});
    for (std::size_t k = 0; k < sweep.cauchy.size(); ++k) {
        t.add_row({format_number(sweep.eps_list[k]), format_number(sweep.eps_list[k + 1]),
                   format_number(sweep.cauchy[k])});
    }
    return t;
}

}  // namespace nlbs
