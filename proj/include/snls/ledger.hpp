#pragma once

#include <vector>

#include "snls/integrator.hpp"
#include "snls/stats.hpp"

namespace snls {

/// Accumulated terms of the energy balance for the smoothed solution under
/// additive forcing. With tau the covered horizon,
///
///   E(I_N u(tau)) = e0
///                 - commutator_term      (deterministic commutator pairing)
///                 - martingale_grad      (gradient-pairing Ito integral)
///                 + martingale_cubic     (cubic-pairing Ito integral)
///                 + quadratic_trace      (Ito correction, nonnegative)
///                 + hs_drift             (tau |I_N phi|^2_{HS(L2;H1-dot)})
///
/// and `residual` is the defect of that identity under left-point
/// quadrature with the increments that drove the run.
struct ItoLedger {
  double e0 = 0;
  double commutator_term = 0;
  double martingale_grad = 0;
  double martingale_cubic = 0;
  double quadratic_trace = 0;
  double hs_drift = 0;
  double final_energy = 0;
  double sup_energy = 0;
  double tau = 0;
  double residual = 0;

  double predicted_final() const {
    return e0 - commutator_term - martingale_grad + martingale_cubic +
           quadratic_trace + hs_drift;
  }
};

/// Left-point accumulation of every ledger term over a stored trajectory.
/// Needs snapshots at every step and the driving increments; martingale
/// terms are evaluated with the coupled path, never re-sampled.
inline ItoLedger ito_energy_ledger(const Trajectory& traj,
                                   const HSOperator& op,
                                   const IMultiplier& im) {
  const Grid& g = traj.config.grid;
  if (im.grid != g) throw GridMismatch("ito_energy_ledger: multiplier grid");
  const bool noisy = traj.config.noise.kind != NoiseSpec::Kind::off;
  if (traj.config.save_stride != 1 ||
      traj.snapshots.size() != traj.energy_i_series.size())
    throw LedgerNeedsPath("ito_energy_ledger: snapshots at every step required");
  if (noisy && !traj.path)
    throw LedgerNeedsPath("ito_energy_ledger: trajectory must retain the path");

  const auto* diag = std::get_if<FourierDiagonal>(&op);
  if (!diag) throw ConfigError("ito_energy_ledger: Fourier-diagonal phi required");
  const std::size_t P = g.points();
  const double dt = traj.config.dt;
  const double cell = g.cell();
  const double coupling = std::sqrt(g.volume() / double(P));

  std::vector<double> xi2(P);
  for_each_mode(g, [&](std::size_t lin, double a, double b, double c) {
    xi2[lin] = a * a + b * b + c * c;
  });

  // closed-form coefficients of the drift terms
  double hs_l2_sq = 0, hs_h1_sq = 0;
  for (std::size_t i = 0; i < P; ++i) {
    const double m2 = im.values[i] * im.values[i];
    hs_l2_sq += m2 * std::norm(diag->symbol[i]);
    hs_h1_sq += xi2[i] * m2 * std::norm(diag->symbol[i]);
  }

  ItoLedger led;
  led.tau = traj.final_time();
  led.e0 = traj.energy_i_series.front();
  led.final_energy = traj.energy_i_series.back();
  for (double e : traj.energy_i_series) led.sup_energy = std::max(led.sup_energy, e);
  led.hs_drift = led.tau * hs_h1_sq;

  const std::size_t covered = traj.energy_i_series.size() - 1;
  std::vector<double> comm_terms(covered), grad_terms(covered),
      cubic_terms(covered), trace_terms(covered);

  Field iu = Field::zeros(g, Rep::spectral);
  for (std::size_t j = 0; j < covered; ++j) {
    const Field& u = traj.snapshots[j];
    for (std::size_t i = 0; i < P; ++i) iu.v[i] = im.values[i] * u.v[i];

    // cubic of the smoothed state and commutator, both dealiased
    Field cub_iu = cubic_nonlinearity(iu);
    Field cub_u = cubic_nonlinearity(u);
    convert(cub_iu, Rep::spectral);
    convert(cub_u, Rep::spectral);

    cplx comm_pair{0, 0};
    double l2_iu_sq = 0;
    for (std::size_t i = 0; i < P; ++i) {
      const double m = im.values[i];
      const cplx lap_iu = -xi2[i] * iu.v[i];
      const cplx i_cub = m * cub_u.v[i];
      const cplx commutator = i_cub - cub_iu.v[i];
      comm_pair += std::conj(lap_iu - i_cub) * commutator;
      l2_iu_sq += std::norm(iu.v[i]);
    }
    comm_terms[j] = dt * cell * comm_pair.imag();
    trace_terms[j] =
        dt * 2.0 * (cell * l2_iu_sq) * hs_l2_sq / g.volume();

    if (noisy) {
      auto inc = traj.path->step(j);
      cplx mg{0, 0}, mc{0, 0};
      for (std::size_t i = 0; i < P; ++i) {
        const double m = im.values[i];
        const cplx drive = m * diag->symbol[i] * inc[i];
        mg += std::conj(-xi2[i] * iu.v[i]) * drive;
        mc += std::conj(cub_iu.v[i]) * drive;
      }
      grad_terms[j] = coupling * mg.imag();
      cubic_terms[j] = coupling * mc.imag();
    } else {
      grad_terms[j] = cubic_terms[j] = 0;
    }
  }
  led.commutator_term = pairwise_sum(comm_terms);
  led.martingale_grad = pairwise_sum(grad_terms);
  led.martingale_cubic = pairwise_sum(cubic_terms);
  led.quadratic_trace = pairwise_sum(trace_terms);
  led.residual = led.final_energy - led.predicted_final();
  return led;
}

/// Ensemble view of the ledger against the expectation budget
///   2 e0 + C tau |I_N phi|^2_{HS(L2;H1-dot)}
///        + C tau^2 |I_N phi|^4_{HS(L2;H3/4-dot)} + C |commutator|.
struct ItoExpectationReport {
  MeanCi sup_energy;
  MeanCi martingale_grad;
  MeanCi martingale_cubic;
  MeanCi commutator_abs;
  MeanCi residual_abs;
  double e0 = 0;
  double budget_hs_h1 = 0;    // tau |I_N phi|^2_{HS(L2;H1-dot)}
  double budget_hs_34 = 0;    // tau^2 |I_N phi|^4_{HS(L2;H3/4-dot)}
  double fitted_constant = 0; // C matching the measured sup-energy mean
  std::size_t paths = 0;
};

inline ItoExpectationReport ito_expectation_report(
    const std::vector<ItoLedger>& ledgers, double tau, const HSOperator& op,
    const IMultiplier& im) {
  ItoExpectationReport r;
  r.paths = ledgers.size();
  std::vector<double> sup, mg, mc, cm, res;
  for (const auto& l : ledgers) {
    sup.push_back(l.sup_energy);
    mg.push_back(l.martingale_grad);
    mc.push_back(l.martingale_cubic);
    cm.push_back(std::abs(l.commutator_term));
    res.push_back(std::abs(l.residual));
  }
  r.sup_energy = mean_ci(sup);
  r.martingale_grad = mean_ci(mg);
  r.martingale_cubic = mean_ci(mc);
  r.commutator_abs = mean_ci(cm);
  r.residual_abs = mean_ci(res);
  r.e0 = ledgers.empty() ? 0.0 : ledgers.front().e0;

  // I_N phi in the two relevant smoothness classes
  const auto& diag = std::get<FourierDiagonal>(op);
  FourierDiagonal ind = diag;
  for (std::size_t i = 0; i < ind.symbol.size(); ++i)
    ind.symbol[i] *= im.values[i];
  const double h1 = hs_norm(HSOperator{ind}, 1.0, true);
  const double h34 = hs_norm(HSOperator{ind}, 0.75, true);
  r.budget_hs_h1 = tau * h1 * h1;
  r.budget_hs_34 = tau * tau * h34 * h34 * h34 * h34;
  const double denom = r.budget_hs_h1 + r.budget_hs_34 + r.commutator_abs.mean;
  r.fitted_constant =
      denom > 0 ? std::max(0.0, r.sup_energy.mean - 2.0 * r.e0) / denom : 0.0;
  return r;
}

/// Per-path mass series against the exact additive-noise drift
/// 2 t |phi|^2_{HS(L2;L2)}.
struct MassLedgerReport {
  double drift_slope = 0;       // fitted d/dt of the ensemble mean drift
  double expected_slope = 0;    // 2 |phi|^2_{HS(L2;L2)}
  MeanCi final_drift;           // M(u(t_end)) - M(u_0) across paths
  MeanCi sup_mass;
  std::size_t paths = 0;

  bool drift_within(double k_sigmas, double t_end) const {
    return final_drift.within_sigmas(expected_slope * t_end, k_sigmas);
  }
};

inline MassLedgerReport mass_ledger(const std::vector<Trajectory>& trajs,
                                    const HSOperator& op) {
  MassLedgerReport r;
  r.paths = trajs.size();
  const double l2 = hs_norm(op, 0.0, false);
  r.expected_slope = 2.0 * l2 * l2;
  if (trajs.empty()) return r;
  std::vector<double> finals, sups;
  for (const auto& t : trajs) {
    finals.push_back(t.mass_series.back() - t.mass_series.front());
    double s = 0;
    for (double m : t.mass_series) s = std::max(s, m);
    sups.push_back(s);
  }
  r.final_drift = mean_ci(finals);
  r.sup_mass = mean_ci(sups);
  // ensemble-mean drift series, fitted against t
  const auto& t0 = trajs.front();
  std::vector<double> mean_drift(t0.times.size(), 0.0), ts = t0.times;
  for (const auto& t : trajs)
    for (std::size_t i = 0; i < mean_drift.size() && i < t.mass_series.size(); ++i)
      mean_drift[i] += (t.mass_series[i] - t.mass_series.front()) / double(trajs.size());
  r.drift_slope = linear_fit(ts, mean_drift).slope;
  return r;
}

}  // namespace snls
