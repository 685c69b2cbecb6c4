#pragma once

#include <utility>

#include "snls/ledger.hpp"
#include "snls/spacetime.hpp"

namespace snls {

/// The two commutator pairings driving the modified-energy drift over an
/// interval J (left-point time quadrature at every stored step):
///   first  = | int_J int conj(Lap I_N u) [I_N, N](u) dx dt |
///   second = | int_J int conj(I_N N(u))  [I_N, N](u) dx dt |
/// Both vanish identically for trajectories band-limited to |xi| <= N/3.
struct CommutatorPairing {
  double grad_pairing = 0;
  double cubic_pairing = 0;
};

inline CommutatorPairing commutator_pairing(const Trajectory& traj,
                                            const IMultiplier& im,
                                            double t_begin, double t_end) {
  if (traj.config.save_stride != 1)
    throw ConfigError("commutator_pairing: needs snapshots at every step");
  const Grid& g = traj.config.grid;
  if (im.grid != g) throw GridMismatch("commutator_pairing");
  const std::size_t P = g.points();
  const double dt = traj.config.dt;
  const double cell = g.cell();
  std::vector<double> xi2(P);
  for_each_mode(g, [&](std::size_t lin, double a, double b, double c) {
    xi2[lin] = a * a + b * b + c * c;
  });

  cplx acc_grad{0, 0}, acc_cubic{0, 0};
  Field iu = Field::zeros(g, Rep::spectral);
  for (std::size_t j = 0; j + 1 < traj.snapshot_times.size(); ++j) {
    const double t = traj.snapshot_times[j];
    if (t < t_begin - 1e-12 || t >= t_end - 1e-12) continue;
    const Field& u = traj.snapshots[j];
    for (std::size_t i = 0; i < P; ++i) iu.v[i] = im.values[i] * u.v[i];
    Field cub_iu = cubic_nonlinearity(iu);
    Field cub_u = cubic_nonlinearity(u);
    convert(cub_iu, Rep::spectral);
    convert(cub_u, Rep::spectral);
    cplx pg{0, 0}, pc{0, 0};
    for (std::size_t i = 0; i < P; ++i) {
      const cplx commutator = im.values[i] * cub_u.v[i] - cub_iu.v[i];
      pg += std::conj(-xi2[i] * iu.v[i]) * commutator;
      pc += std::conj(im.values[i] * cub_u.v[i]) * commutator;
    }
    acc_grad += dt * cell * pg;
    acc_cubic += dt * cell * pc;
  }
  return {std::abs(acc_grad), std::abs(acc_cubic)};
}

/// Power-law growth fit of the running maximum of |u(t)|_{H^s}^2 over the
/// later part of the series (the transient is skipped). The fitted exponent
/// is an upper-bound check against predicted polynomial growth, and the
/// plain linear slope of the squared norm is reported for flows whose mean
/// square grows linearly.
struct GrowthReport {
  double exponent = 0;       // log-log slope of running max |u|_{H^s}^2
  double exponent_stderr = 0;
  double r2 = 0;
  double linear_slope = 0;   // d/dt of |u|_{H^s}^2 over the fit range
  double final_value = 0;
  double sup_value = 0;
};

inline GrowthReport growth_tracker(const std::vector<double>& times,
                                   const std::vector<double>& hs_series,
                                   double skip_fraction = 0.25) {
  GrowthReport r;
  const std::size_t n = times.size();
  if (n < 4) return r;
  std::vector<double> runmax(n);
  double m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, hs_series[i] * hs_series[i]);
    runmax[i] = m;
  }
  r.sup_value = m;
  r.final_value = hs_series.back() * hs_series.back();
  const std::size_t start = std::max<std::size_t>(1, std::size_t(n * skip_fraction));
  std::vector<double> ts(times.begin() + start, times.end());
  std::vector<double> ys(runmax.begin() + start, runmax.end());
  const LineFit ll = loglog_fit(ts, ys);
  r.exponent = ll.slope;
  r.exponent_stderr = ll.slope_stderr;
  r.r2 = ll.r2;
  std::vector<double> sq(hs_series.begin() + start, hs_series.end());
  for (auto& v : sq) v *= v;
  r.linear_slope = linear_fit(ts, sq).slope;
  return r;
}

inline GrowthReport growth_tracker(const Trajectory& traj) {
  return growth_tracker(traj.times, traj.hs_series);
}

/// Predicted growth exponent of |u|_{H^s}^2 at regularity s and margin
/// theta: (1 - s - theta) / (3 (s - 5/6) - 2 theta).
inline double predicted_growth_exponent(double s, double theta = 0.0) {
  return (1.0 - s - theta) / (3.0 * (s - 5.0 / 6.0) - 2.0 * theta);
}

}  // namespace snls
