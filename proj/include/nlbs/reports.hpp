#pragma once

#include <cstddef>
#include <vector>

#include "nlbs/csv.hpp"
#include "nlbs/norms.hpp"
#include "nlbs/pricer.hpp"
#include "nlbs/psi_ode.hpp"
#include "nlbs/stepper.hpp"

namespace nlbs {

/// Column layouts of every emitted file.
///   psi.csv            A,psi
///   psi_certify.csv    check,pass,worst_margin,worst_at
///   snapshots.csv      t,x,u
///   diagnostics.csv    t,dt,substeps,halvings,newton_iterations,picard_iterations,residual,min_forward_difference
///   monotonicity.csv   t,min_forward_difference,x,flagged
///   norms.csv          norm_name,value
///   price.csv          tau,S,V
///   residual.csv       tau,S,residual_scaled
///   sweep.csv          eps,norm_name,value
///   exponents.csv      norm_name,p_measured,p_bound,pass
///   cauchy.csv         eps_coarse,eps_fine,delta

CsvTable psi_csv(const PsiTable& table, const std::vector<double>& A);
CsvTable psi_certificate_csv(const PsiCertificate& cert);

/// Rows for the snapshots listed in `indices`, nodes in grid order.
CsvTable snapshots_csv(const Trajectory& traj, const std::vector<std::size_t>& indices);
CsvTable diagnostics_csv(const Trajectory& traj);
CsvTable monotonicity_csv(const Trajectory& traj, const MonotonicityReport& report);
CsvTable norms_csv(const NormReport& report);

/// Price curves listed in `indices`, in the order given.
CsvTable price_csv(const std::vector<PriceCurve>& curves, const std::vector<std::size_t>& indices);
CsvTable residual_csv(const ResidualReport& report);

CsvTable sweep_csv(const SweepResult& sweep);
CsvTable exponents_csv(const SweepResult& sweep);
CsvTable cauchy_csv(const SweepResult& sweep);

}  // namespace nlbs
