#pragma once

#include <mutex>

#include "snls/ensemble.hpp"
#include "snls/scaling.hpp"

namespace snls {

struct GwpTermRow {
  std::string name;
  double measured = 0;   // Monte Carlo / per-run value
  double analytic = 0;   // closed form where one exists (0 marks "none")
  bool has_analytic = false;
};

/// One rung of the globalization ladder at a fixed cutoff N.
struct GwpRunReport {
  double N = 0;
  double lambda = 0;
  double horizon = 0;  // lambda^2 T
  double e0_scaled = 0;
  double hs_h1_scaled = 0;   // |I_N phi^lambda|_{HS(L2;H1-dot)}
  double hs_34_scaled = 0;   // |I_N phi^lambda|_{HS(L2;H3/4-dot)}
  double stopping_fraction = 0;
  double stopping_half95 = 0;
  double window_violation_fraction = 0;
  std::size_t windows_checked = 0;
  double mean_commutator_abs = 0;  // over the instrumented paths
  std::vector<GwpTermRow> terms;
  EnsembleReport ensemble;
};

struct GwpOptions {
  std::vector<double> n_list;  // empty: use the recommended N only
  std::size_t paths = 32;
  std::size_t ledger_paths = 4;
  unsigned threads = 1;
  std::uint64_t seed_base = 1000;
  double xsb_b = 0.45;  // temporal regularity proxy for the noise threshold
};

struct GwpReport {
  double T = 0, eps = 0, s = 0, theta = 0, eta0 = 0, eta1 = 0;
  ChosenParameters recommended;
  std::vector<GwpRunReport> runs;
  double failure_fraction_total = 0;  // stopping or threshold violation
  bool within_budget = false;
};

/// The globalization procedure at desk scale: pick (N, lambda) from the
/// target horizon and failure budget, scale data and forcing, run the
/// ensemble on [0, lambda^2 T], and account for every failure source term
/// by term, reporting measured magnitudes next to their closed forms.
inline GwpReport gwp_pipeline(double T, double eps, double s, double theta,
                              const SimConfig& base, GwpOptions opt = {}) {
  GwpReport rep;
  rep.T = T;
  rep.eps = eps;
  rep.s = s;
  rep.theta = theta;
  rep.eta0 = base.eta0;
  rep.eta1 = base.eta1;
  rep.recommended = choose_parameters(T, eps, s, theta);
  std::vector<double> n_list =
      opt.n_list.empty() ? std::vector<double>{rep.recommended.N} : opt.n_list;

  for (double N : n_list) {
    GwpRunReport rr;
    rr.N = N;
    // the power law itself: the box-relabeling lattice makes every lambda
    // exact, so no rounding is needed inside the pipeline
    const double lambda = std::pow(N, rep.recommended.lambda_exponent);
    rr.lambda = lambda;
    rr.horizon = lambda * lambda * T;

    SimConfig pre = base;
    pre.s = s;
    pre.N = N;
    pre.t_end = T;
    ScalingPlan plan = make_scaling_plan(base.grid, lambda, N, s, theta);
    SimConfig scaled = scaled_run_setup(pre, plan);
    scaled.retain_path = true;
    scaled.save_stride = 0;

    const IMultiplier im = build_multiplier(N, s, scaled.grid, scaled.profile);
    const std::optional<HSOperator> op = build_noise_operator(scaled);
    rr.e0_scaled = modified_energy(*scaled.data.explicit_field, im);
    if (op) {
      auto ind = std::get<FourierDiagonal>(*op);
      for (std::size_t i = 0; i < ind.symbol.size(); ++i)
        ind.symbol[i] *= im.values[i];
      rr.hs_h1_scaled = hs_norm(HSOperator{ind}, 1.0, true);
      rr.hs_34_scaled = hs_norm(HSOperator{ind}, 0.75, true);
    }

    // noise-threshold accounting: fraction of unit windows on which the
    // spacetime norm of grad I_N Psi exceeds eta1
    std::vector<double> weight(scaled.grid.points());
    for_each_mode(scaled.grid, [&](std::size_t lin, double a, double b, double c) {
      weight[lin] = std::sqrt(a * a + b * b + c * c) * im.values[lin];
    });
    const std::size_t n_windows =
        static_cast<std::size_t>(std::floor(rr.horizon + 1e-9));
    std::vector<std::size_t> violations(opt.paths, 0);
    std::mutex noise_mutex;

    auto hook = [&](std::size_t idx, const Trajectory& traj) {
      if (!op || n_windows == 0 || !traj.path) return;
      const std::size_t steps_per_window =
          static_cast<std::size_t>(std::llround(1.0 / scaled.dt));
      StochasticConvolution sc =
          stochastic_convolution(*op, *traj.path, every_step(traj.path->steps));
      std::size_t count = 0;
      for (std::size_t w = 0; w < n_windows; ++w) {
        const std::size_t j0 = w * steps_per_window;
        const std::size_t j1 =
            std::min(j0 + steps_per_window, sc.psi.size() - 1);
        if (j1 <= j0) break;
        SpaceTimeField st;
        st.grid = scaled.grid;
        st.t0 = sc.times[j0];
        st.dt = scaled.dt;
        st.slices = j1 - j0 + 1;
        const std::size_t P = scaled.grid.points();
        st.vals.resize(st.slices * P);
        for (std::size_t j = 0; j < st.slices; ++j)
          for (std::size_t m = 0; m < P; ++m)
            st.vals[j * P + m] = weight[m] * sc.psi[j0 + j].v[m];
        if (xsb_norm(st, 0.0, opt.xsb_b) > base.eta1) ++count;
      }
      std::lock_guard<std::mutex> lock(noise_mutex);
      violations[idx] = count;
    };

    rr.ensemble = run_ensemble(scaled, opt.paths, opt.seed_base, opt.threads, hook);
    std::size_t stopped = 0;
    for (const auto& p : rr.ensemble.paths)
      if (p.stopping && *p.stopping < rr.horizon) ++stopped;
    rr.stopping_fraction = double(stopped) / double(opt.paths);
    rr.stopping_half95 =
        1.959963984540054 *
        std::sqrt(std::max(0.0, rr.stopping_fraction * (1 - rr.stopping_fraction)) /
                  double(opt.paths));
    std::size_t total_viol = 0;
    for (std::size_t v : violations) total_viol += v;
    rr.windows_checked = n_windows * opt.paths;
    rr.window_violation_fraction =
        rr.windows_checked ? double(total_viol) / double(rr.windows_checked) : 0.0;

    // instrumented sub-ensemble for the measured commutator magnitude
    if (opt.ledger_paths > 0 && op) {
      SimConfig heavy = scaled;
      heavy.save_stride = 1;
      std::vector<double> comm;
      for (std::size_t i = 0; i < std::min(opt.ledger_paths, opt.paths); ++i) {
        heavy.seed = opt.seed_base + i;
        Trajectory t = run(heavy);
        if (t.status != Trajectory::Status::completed) continue;
        const ItoLedger led = ito_energy_ledger(t, *op, im);
        comm.push_back(std::abs(led.commutator_term));
      }
      if (!comm.empty()) rr.mean_commutator_abs = mean_ci(comm).mean;
    }

    const double inv_eta0 = 1.0 / base.eta0;
    rr.terms.push_back({"initial_energy", 2 * inv_eta0 * rr.e0_scaled,
                        2 * inv_eta0 * rr.e0_scaled, true});
    rr.terms.push_back(
        {"hs_drift",
         inv_eta0 * rr.horizon * rr.hs_h1_scaled * rr.hs_h1_scaled,
         inv_eta0 * rr.horizon * rr.hs_h1_scaled * rr.hs_h1_scaled, true});
    const double q34 = rr.hs_34_scaled * rr.hs_34_scaled;
    rr.terms.push_back({"quartic_trace_budget",
                        inv_eta0 * rr.horizon * rr.horizon * q34 * q34,
                        inv_eta0 * rr.horizon * rr.horizon * q34 * q34, true});
    rr.terms.push_back(
        {"commutator", inv_eta0 * rr.mean_commutator_abs, 0.0, false});
    rep.runs.push_back(std::move(rr));
  }

  double worst = 0;
  for (const auto& rr : rep.runs) {
    double total = rr.stopping_fraction + rr.window_violation_fraction;
    worst = std::max(worst, total);
  }
  rep.failure_fraction_total = worst;
  rep.within_budget = worst <= eps;
  return rep;
}

}  // namespace snls
