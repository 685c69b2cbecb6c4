#pragma once

#include <vector>

#include "snls/integrator.hpp"

namespace snls {

/// Complex samples on a uniform time window, spatially spectral.
/// Storage is slice-major: vals[j * P + mode] at time t0 + j dt.
struct SpaceTimeField {
  Grid grid;
  double t0 = 0;
  double dt = 0;
  std::size_t slices = 0;
  std::vector<cplx> vals;

  double window_length() const { return dt * double(slices); }
};

/// Smooth temporal taper standing in for the restriction-norm extension:
/// cosine half-windows over the leading and trailing `margin` fraction of
/// the window (Tukey window). The taper is part of a report's metadata;
/// only norms taken with the same taper are comparable.
struct WindowSpec {
  double margin = 0.10;

  double weight(double theta) const {  // theta in [0, 1]
    if (margin <= 0) return 1.0;
    if (theta < margin)
      return 0.5 * (1.0 - std::cos(std::numbers::pi * theta / margin));
    if (theta > 1.0 - margin)
      return 0.5 * (1.0 - std::cos(std::numbers::pi * (1.0 - theta) / margin));
    return 1.0;
  }
};

/// Samples a trajectory on [t_begin, t_end], optionally pre-applying a
/// spatial multiplier (e.g. |xi| m_N(xi) to measure grad I_N u).
inline SpaceTimeField spacetime_from_trajectory(
    const Trajectory& traj, double t_begin, double t_end,
    const std::vector<double>* spatial_weight = nullptr) {
  if (traj.config.save_stride != 1)
    throw ConfigError("spacetime_from_trajectory: needs snapshots at every step");
  const double dt = traj.config.dt;
  const std::size_t j0 = static_cast<std::size_t>(std::llround(t_begin / dt));
  const std::size_t j1 = static_cast<std::size_t>(std::llround(t_end / dt));
  if (j1 >= traj.snapshots.size() || j0 > j1)
    throw ConfigError("spacetime_from_trajectory: window outside trajectory");
  const std::size_t P = traj.config.grid.points();
  SpaceTimeField st;
  st.grid = traj.config.grid;
  st.t0 = t_begin;
  st.dt = dt;
  st.slices = j1 - j0 + 1;
  st.vals.resize(st.slices * P);
  for (std::size_t j = 0; j < st.slices; ++j) {
    const Field& f = traj.snapshots[j0 + j];
    for (std::size_t m = 0; m < P; ++m)
      st.vals[j * P + m] =
          spatial_weight ? (*spatial_weight)[m] * f.v[m] : f.v[m];
  }
  return st;
}

inline SpaceTimeField spacetime_from_convolution(
    const StochasticConvolution& sc, const Grid& grid,
    const std::vector<double>* spatial_weight = nullptr) {
  if (sc.times.size() < 2) throw ConfigError("spacetime: too few slices");
  SpaceTimeField st;
  st.grid = grid;
  st.t0 = sc.times.front();
  st.dt = sc.times[1] - sc.times[0];
  st.slices = sc.times.size();
  const std::size_t P = grid.points();
  st.vals.resize(st.slices * P);
  for (std::size_t j = 0; j < st.slices; ++j)
    for (std::size_t m = 0; m < P; ++m)
      st.vals[j * P + m] = spatial_weight ? (*spatial_weight)[m] * sc.psi[j].v[m]
                                          : sc.psi[j].v[m];
  return st;
}

/// Windowed space-time Fourier norm with weight <xi>^s <tau + |xi|^2>^b.
/// At b = 0 this reduces exactly to the tapered L2_t H^s_x norm.
inline double xsb_norm(const SpaceTimeField& st, double s, double b,
                       const WindowSpec& window = {}) {
  const std::size_t P = st.grid.points();
  const std::size_t M = st.slices;
  if (M == 0) return 0.0;
  const double T = st.window_length();
  std::vector<double> taper(M);
  for (std::size_t j = 0; j < M; ++j)
    taper[j] = window.weight(double(j) / double(M - 1 > 0 ? M - 1 : 1));

  std::vector<double> xi2(P);
  for_each_mode(st.grid, [&](std::size_t lin, double a, double bb, double c) {
    xi2[lin] = a * a + bb * bb + c * c;
  });

  const double quad = st.grid.cell() * (T / double(M));
  double total = 0.0;
  std::vector<cplx> line(M);
  fft::Plan1d plan(M);
  for (std::size_t m = 0; m < P; ++m) {
    for (std::size_t j = 0; j < M; ++j)
      line[j] = taper[j] * st.vals[j * P + m];
    plan.forward(line.data());
    const double ws = std::pow(1.0 + xi2[m], s);
    for (std::size_t j = 0; j < M; ++j) {
      // signed temporal frequency of DFT bin j over window length T
      const long k = j <= M / 2 - (M % 2 == 0 ? 1 : 0) ? long(j) : long(j) - long(M);
      const double tau = 2.0 * std::numbers::pi * double(k) / T;
      const double mod = tau + xi2[m];
      const double wb = std::pow(1.0 + mod * mod, b);
      total += ws * wb * std::norm(line[j]);
    }
  }
  return std::sqrt(quad * total);
}

struct StrichartzResult {
  double value = 0;
  bool admissible = true;
};

/// Time quadrature (trapezoid) of spatial L^r norms: |u|_{L^q_t L^r_x} over
/// [t_begin, t_end]. An inadmissible pair is flagged but still computed.
inline StrichartzResult strichartz_norm(const Trajectory& traj, double q,
                                        double r, double t_begin,
                                        double t_end) {
  StrichartzResult out;
  const int d = traj.config.grid.dim;
  out.admissible =
      q >= 2 && r >= 2 &&
      std::abs(2.0 / q + double(d) / r - double(d) / 2.0) < 1e-12;
  std::vector<double> ts, vals;
  for (std::size_t i = 0; i < traj.snapshot_times.size(); ++i) {
    const double t = traj.snapshot_times[i];
    if (t < t_begin - 1e-12 || t > t_end + 1e-12) continue;
    Field f = traj.snapshots[i];
    const double lr = std::isinf(r) ? sup_norm(f) : lebesgue_norm(f, r);
    ts.push_back(t);
    vals.push_back(lr);
  }
  if (ts.empty()) return out;
  if (std::isinf(q)) {
    for (double v : vals) out.value = std::max(out.value, v);
    return out;
  }
  double acc = 0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    acc += 0.5 * (ts[i + 1] - ts[i]) *
           (std::pow(vals[i], q) + std::pow(vals[i + 1], q));
  out.value = std::pow(acc, 1.0 / q);
  return out;
}

}  // namespace snls
