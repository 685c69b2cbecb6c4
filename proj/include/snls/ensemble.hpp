#pragma once

#include <functional>
#include <optional>
#include <thread>

#include "snls/diagnostics.hpp"
#include "snls/ledger.hpp"

namespace snls {

struct PathSummary {
  std::uint64_t seed = 0;
  bool blew_up = false;
  double blowup_time = -1;
  std::optional<double> stopping;
  double sup_mass = 0;
  double sup_energy_i = 0;
  double sup_h1_i = 0;
  double final_mass = 0;
  double final_hs = 0;
  double mass_drift = 0;
};

struct EnsembleReport {
  std::uint64_t config_hash = 0;
  std::uint64_t seed_base = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<PathSummary> paths;
  MeanCi sup_mass;
  MeanCi sup_energy_i;
  MeanCi final_mass_drift;
  MeanCi final_hs;
  double stopping_fraction = 0;
  double stopping_fraction_half95 = 0;
  std::size_t blowup_count = 0;
  GrowthReport mean_growth;  // growth fit of the ensemble-mean H^s series

  bool all_blew_up() const {
    return !paths.empty() && blowup_count == paths.size();
  }
};

/// Runs n independent paths with seeds seed_base + i. The reduction is over
/// path-indexed slots with pairwise summation, so the report is identical
/// for any worker count. `hook` (optional) runs in the worker on each
/// finished trajectory; it must only touch per-index state.
inline EnsembleReport run_ensemble(
    const SimConfig& cfg, std::size_t n_paths, std::uint64_t seed_base,
    unsigned threads = 1,
    const std::function<void(std::size_t, const Trajectory&)>& hook = {}) {
  if (n_paths == 0) throw ConfigError("run_ensemble: n_paths must be >= 1");
  EnsembleReport rep;
  rep.seed_base = seed_base;
  rep.seeds.resize(n_paths);
  rep.paths.resize(n_paths);
  std::vector<std::vector<double>> hs_sum;  // per path H^s series

  hs_sum.resize(n_paths);
  auto work = [&](std::size_t i) {
    SimConfig c = cfg;
    c.seed = seed_base + i;
    Trajectory traj = run(c);
    PathSummary s;
    s.seed = c.seed;
    s.blew_up = traj.status == Trajectory::Status::blowup;
    s.blowup_time = traj.blowup_time;
    s.stopping = stopping_time(traj, cfg.eta0);
    for (double m : traj.mass_series) s.sup_mass = std::max(s.sup_mass, m);
    for (double e : traj.energy_i_series)
      s.sup_energy_i = std::max(s.sup_energy_i, e);
    for (double h : traj.h1_i_series) s.sup_h1_i = std::max(s.sup_h1_i, h);
    s.final_mass = traj.mass_series.back();
    s.mass_drift = traj.mass_series.back() - traj.mass_series.front();
    s.final_hs = traj.hs_series.back();
    rep.paths[i] = s;
    rep.seeds[i] = c.seed;
    hs_sum[i] = traj.hs_series;
    if (hook) hook(i, traj);
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_paths)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n_paths; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w]() {
        for (std::size_t i = w; i < n_paths; i += workers) work(i);
      });
    for (auto& t : pool) t.join();
  }

  std::vector<double> sup_mass, sup_ei, drift, fhs;
  std::size_t stopped = 0;
  for (const auto& p : rep.paths) {
    sup_mass.push_back(p.sup_mass);
    sup_ei.push_back(p.sup_energy_i);
    drift.push_back(p.mass_drift);
    fhs.push_back(p.final_hs);
    if (p.stopping) ++stopped;
    if (p.blew_up) ++rep.blowup_count;
  }
  rep.sup_mass = mean_ci(sup_mass);
  rep.sup_energy_i = mean_ci(sup_ei);
  rep.final_mass_drift = mean_ci(drift);
  rep.final_hs = mean_ci(fhs);
  rep.stopping_fraction = double(stopped) / double(n_paths);
  // binomial normal-approximation half-width
  rep.stopping_fraction_half95 =
      1.959963984540054 *
      std::sqrt(std::max(0.0, rep.stopping_fraction * (1 - rep.stopping_fraction)) /
                double(n_paths));

  // ensemble-mean H^s series growth (series share the step grid)
  std::size_t minlen = hs_sum[0].size();
  for (const auto& s : hs_sum) minlen = std::min(minlen, s.size());
  if (minlen >= 4) {
    std::vector<double> mean_series(minlen, 0.0), times(minlen);
    for (std::size_t i = 0; i < minlen; ++i) times[i] = double(i) * cfg.dt;
    for (const auto& s : hs_sum)
      for (std::size_t i = 0; i < minlen; ++i)
        mean_series[i] += s[i] / double(n_paths);
    rep.mean_growth = growth_tracker(times, mean_series);
  }
  return rep;
}

enum class RefinementAxis { dt, grid };

struct ConvergenceStudy {
  RefinementAxis axis = RefinementAxis::dt;
  std::vector<double> h;       // dt or 1/n per level
  std::vector<double> errors;  // against the next-finer level or reference
  double order = 0;            // log-log fit of errors vs h
};

/// dt-refinement with shared noise: one path at the finest level, coarser
/// levels consume exact block sums of its increments; errors are final-time
/// L2 distances against the reference (one level finer than the ladder).
inline ConvergenceStudy convergence_study_dt(const SimConfig& base,
                                             std::vector<double> dts) {
  ConvergenceStudy out;
  out.axis = RefinementAxis::dt;
  // the reference sits two halvings below the ladder so its own error does
  // not bend the fitted slope
  const double dt_ref = dts.back() / 4.0;
  SimConfig ref_cfg = base;
  ref_cfg.dt = dt_ref;
  ref_cfg.save_stride = 0;
  const bool noisy = base.noise.kind != NoiseSpec::Kind::off;
  std::optional<WienerPath> fine;
  if (noisy)
    fine = sample_wiener(base.seed, dt_ref, ref_cfg.steps(), base.grid);
  Trajectory ref = run(ref_cfg, fine ? &*fine : nullptr);
  const Field& uref = ref.snapshots.back();

  for (double dt : dts) {
    SimConfig c = base;
    c.dt = dt;
    c.save_stride = 0;
    std::optional<WienerPath> coarse;
    if (noisy) {
      const std::size_t factor =
          static_cast<std::size_t>(std::llround(dt / dt_ref));
      coarse = coarsen(*fine, factor);
    }
    Trajectory t = run(c, coarse ? &*coarse : nullptr);
    out.h.push_back(dt);
    out.errors.push_back(l2_norm(t.snapshots.back() - uref));
  }
  out.order = loglog_fit(out.h, out.errors).slope;
  return out;
}

/// Grid ladder at fixed dt on shared (band-limited) data: errors between
/// consecutive levels over the common retained modes.
inline ConvergenceStudy convergence_study_grid(const SimConfig& base,
                                               std::vector<int> ns) {
  ConvergenceStudy out;
  out.axis = RefinementAxis::grid;
  std::vector<Field> finals;
  for (int n : ns) {
    SimConfig c = base;
    c.grid = Grid::cubic(base.grid.dim, n, base.grid.box[0]);
    c.save_stride = 0;
    Trajectory t = run(c);
    finals.push_back(t.snapshots.back());
  }
  for (std::size_t l = 0; l + 1 < finals.size(); ++l) {
    const Field& a = finals[l];
    const Field& b = finals[l + 1];
    double diff2 = 0;
    for_each_mode(a.grid, [&](std::size_t lin, double, double, double) {
      const ModeIndex m = decompose(a.grid, lin);
      int idx[3] = {0, 0, 0};
      for (int ax = 0; ax < 3; ++ax) {
        const int i = ax == 0 ? m.i0 : (ax == 1 ? m.i1 : m.i2);
        const int k = a.grid.k_index(ax, i);
        idx[ax] = k >= 0 ? k : k + b.grid.n[ax];
      }
      const cplx va = a.v[lin] / std::sqrt(double(a.grid.points()));
      const cplx vb = b.v[linear_index(b.grid, idx[0], idx[1], idx[2])] /
                      std::sqrt(double(b.grid.points()));
      diff2 += std::norm(va - vb);
    });
    out.h.push_back(1.0 / ns[l]);
    out.errors.push_back(std::sqrt(a.grid.volume() * diff2));
  }
  out.order = loglog_fit(out.h, out.errors).slope;
  return out;
}

}  // namespace snls
