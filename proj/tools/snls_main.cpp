// Command-line front end: simulation, noise sampling, energy-ledger checks,
// commutator decay fits, scaling tables, space-time norms, the globalization
// pipeline, refinement studies, and plotting.
//
// Exit codes: 0 success; 2 budget-violation report (outputs still written);
// 3 every path blew up; 4 configuration error.

#include <CLI11.hpp>

#include <snls/snls.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace snls;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBudget = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitConfig = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t paths = 1;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "configuration file (key = value sections)");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--set", o.overrides,
                  "override a config entry, e.g. --set time.dt=1e-3")
      ->take_all();
  cmd->add_option("--seed", o.seed, "base RNG seed")->each([&](std::string) {
    o.seed_set = true;
  });
  cmd->add_option("--paths", o.paths, "number of Monte Carlo paths");
  cmd->add_option("--threads", o.threads, "worker threads for ensembles");
}

ConfigMap resolve_map(const CommonOpts& o) {
  ConfigMap m;
  if (!o.config_path.empty()) m = load_config_file(o.config_path);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects section.key=value, got " + kv);
    m[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return m;
}

SimConfig resolve_config(const CommonOpts& o) {
  SimConfig cfg = to_sim_config(resolve_map(o));
  if (o.seed_set) cfg.seed = o.seed;
  return cfg;
}

fs::path prepare_out(const CommonOpts& o) {
  fs::path dir(o.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_provenance(const fs::path& dir, const SimConfig& cfg,
                      const std::vector<std::uint64_t>& seeds,
                      std::vector<std::string> outputs) {
  outputs.push_back("config.resolved");
  std::ofstream os(dir / "config.resolved");
  os << serialize_config(from_sim_config(cfg));
  write_json(dir / "manifest.json", make_manifest(cfg, seeds, outputs));
}

int cmd_simulate(const CommonOpts& o) {
  SimConfig cfg = resolve_config(o);
  const fs::path dir = prepare_out(o);
  std::vector<std::string> outputs;

  std::mutex io_mutex;
  auto hook = [&](std::size_t, const Trajectory& traj) {
    std::lock_guard<std::mutex> lock(io_mutex);
    const std::string tag = std::to_string(traj.config.seed);
    const std::string csv = "series_" + tag + ".csv";
    write_trajectory_csv(dir / csv, traj);
    outputs.push_back(csv);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      const std::string snap = "snap_" + tag + "_" + std::to_string(i) + ".aclf";
      write_field_aclf(dir / snap, traj.snapshots[i]);
      outputs.push_back(snap);
    }
  };
  EnsembleReport rep = run_ensemble(cfg, o.paths, cfg.seed, o.threads, hook);
  rep.config_hash = config_hash(cfg);
  std::sort(outputs.begin(), outputs.end());
  write_json(dir / "ensemble_report.json", to_json(rep));
  outputs.push_back("ensemble_report.json");
  write_provenance(dir, cfg, rep.seeds, outputs);
  std::cout << "simulate: " << o.paths << " path(s), " << rep.blowup_count
            << " blow-up(s); outputs in " << dir << "\n";
  return rep.blowup_count == o.paths ? kExitBlowup : kExitOk;
}

int cmd_sample_noise(const CommonOpts& o) {
  SimConfig cfg = resolve_config(o);
  const fs::path dir = prepare_out(o);
  const auto op_spec = build_operator_spec(cfg);
  if (!op_spec) throw ConfigError("sample-noise: configure a noise operator");

  json report;
  report["hs_l2"] = hs_norm(*op_spec, 0.0, false);
  report["hs_hs_inhom"] = hs_norm(*op_spec, cfg.s, false);
  report["hs_h34"] = hs_norm(*op_spec, 0.75, true);
  const bool diagonal = std::holds_alternative<FourierDiagonal>(*op_spec);
  report["fourier_diagonal"] = diagonal;

  std::vector<std::uint64_t> seeds;
  if (diagonal) {
    // ensemble second moment of |Psi(t)|_{H^s}^2 against 2 t |phi|^2
    const std::size_t steps = cfg.steps();
    std::vector<double> finals;
    std::vector<double> mean_sq(steps + 1, 0.0);
    for (std::size_t i = 0; i < o.paths; ++i) {
      const std::uint64_t seed = cfg.seed + i;
      seeds.push_back(seed);
      WienerPath p = sample_wiener(seed, cfg.dt, steps, cfg.grid);
      auto sc = stochastic_convolution(*op_spec, p, every_step(steps));
      for (std::size_t j = 0; j <= steps; ++j) {
        const double n = sobolev_norm(sc.psi[j], cfg.s, false);
        mean_sq[j] += n * n / double(o.paths);
        if (j == steps) finals.push_back(n * n);
      }
    }
    const MeanCi fin = mean_ci(finals);
    const double hs = hs_norm(*op_spec, cfg.s, false);
    report["mean_final_sq"] = to_json(fin);
    report["expected_final_sq"] = 2.0 * cfg.t_end * hs * hs;
    report["within_3_sigma"] =
        fin.within_sigmas(2.0 * cfg.t_end * hs * hs, 3.0);
    std::vector<double> ts(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) ts[j] = double(j) * cfg.dt;
    write_csv(dir / "psi_mean_sq.csv", {"t", "mean_hs_sq"}, {ts, mean_sq});
  }
  auto wn = scaled_white_noise_check(2, 2, 0, cfg.seed);
  report["white_noise_scaling"] = {
      {"variance_ratio", wn.variance_ratio},
      {"variance_ratio_sigma", wn.variance_ratio_sigma},
      {"quadratic_variation_ratio", wn.quadratic_variation_ratio},
      {"cells", wn.cells}};
  write_json(dir / "noise_report.json", report);
  write_provenance(dir, cfg, seeds,
                   diagonal ? std::vector<std::string>{"noise_report.json",
                                                       "psi_mean_sq.csv"}
                            : std::vector<std::string>{"noise_report.json"});
  std::cout << "sample-noise: report in " << dir << "\n";
  const bool ok = !diagonal || report["within_3_sigma"].get<bool>();
  return ok ? kExitOk : kExitBudget;
}

int cmd_ito_check(const CommonOpts& o) {
  SimConfig cfg = resolve_config(o);
  cfg.save_stride = 1;
  cfg.retain_path = true;
  const fs::path dir = prepare_out(o);
  const auto op = build_noise_operator(cfg);
  const HSOperator phi = op ? *op : zero_operator(cfg.grid);
  IMultiplier im = build_multiplier(cfg.N, cfg.s, cfg.grid, cfg.profile);

  std::vector<ItoLedger> ledgers(o.paths);
  auto hook = [&](std::size_t i, const Trajectory& traj) {
    ledgers[i] = ito_energy_ledger(traj, phi, im);
  };
  EnsembleReport rep = run_ensemble(cfg, o.paths, cfg.seed, o.threads, hook);

  ItoExpectationReport exp_rep =
      ito_expectation_report(ledgers, cfg.t_end, phi, im);
  json report = to_json(exp_rep);
  std::vector<double> e0s, comms, mgs, mcs, qts, hss, resids;
  for (const auto& l : ledgers) {
    e0s.push_back(l.e0);
    comms.push_back(l.commutator_term);
    mgs.push_back(l.martingale_grad);
    mcs.push_back(l.martingale_cubic);
    qts.push_back(l.quadratic_trace);
    hss.push_back(l.hs_drift);
    resids.push_back(l.residual);
  }
  write_csv(dir / "ledger_terms.csv",
            {"e0", "commutator", "martingale_grad", "martingale_cubic",
             "quadratic_trace", "hs_drift", "residual"},
            {e0s, comms, mgs, mcs, qts, hss, resids});
  const bool centered = exp_rep.martingale_grad.within_sigmas(0.0, 3.0) &&
                        exp_rep.martingale_cubic.within_sigmas(0.0, 3.0);
  report["martingales_centered"] = centered;
  write_json(dir / "ito_report.json", report);
  write_provenance(dir, cfg, rep.seeds, {"ito_report.json", "ledger_terms.csv"});
  std::cout << "ito-check: " << o.paths << " ledger(s); martingales "
            << (centered ? "centered" : "OFF-CENTER") << "\n";
  return centered ? kExitOk : kExitBudget;
}

int cmd_commutator_decay(const CommonOpts& o, std::vector<double> n_list,
                         double slope_budget) {
  SimConfig cfg = resolve_config(o);
  cfg.save_stride = 1;
  const fs::path dir = prepare_out(o);
  if (n_list.empty()) n_list = {4, 8, 16, 32};

  std::vector<double> mean_grad, mean_cubic;
  std::vector<std::uint64_t> seeds;
  for (double N : n_list) {
    std::vector<double> grads(o.paths), cubics(o.paths);
    IMultiplier im = build_multiplier(N, cfg.s, cfg.grid, cfg.profile);
    auto hook = [&](std::size_t i, const Trajectory& traj) {
      auto p = commutator_pairing(traj, im, 0.0, cfg.t_end);
      grads[i] = p.grad_pairing;
      cubics[i] = p.cubic_pairing;
    };
    EnsembleReport rep = run_ensemble(cfg, o.paths, cfg.seed, o.threads, hook);
    if (seeds.empty()) seeds = rep.seeds;
    mean_grad.push_back(mean_ci(grads).mean);
    mean_cubic.push_back(mean_ci(cubics).mean);
  }
  const LineFit fit_grad = loglog_fit(n_list, mean_grad);
  const LineFit fit_cubic = loglog_fit(n_list, mean_cubic);
  write_csv(dir / "pairing_vs_n.csv", {"N", "grad_pairing", "cubic_pairing"},
            {n_list, mean_grad, mean_cubic});
  json report{{"n_list", n_list},
              {"mean_grad_pairing", mean_grad},
              {"mean_cubic_pairing", mean_cubic},
              {"grad_slope", fit_grad.slope},
              {"grad_r2", fit_grad.r2},
              {"cubic_slope", fit_cubic.slope},
              {"cubic_r2", fit_cubic.r2},
              {"slope_budget", slope_budget}};
  const bool ok = fit_grad.slope <= slope_budget;
  report["within_budget"] = ok;
  write_json(dir / "decay_report.json", report);
  write_provenance(dir, cfg, seeds, {"decay_report.json", "pairing_vs_n.csv"});
  std::cout << "commutator-decay: slope " << fit_grad.slope << " (r2 "
            << fit_grad.r2 << "), budget " << slope_budget << "\n";
  return ok ? kExitOk : kExitBudget;
}

int cmd_scaling_check(const CommonOpts& o, double T, double eps, double s,
                      double theta) {
  const fs::path dir = prepare_out(o);
  ChosenParameters p = choose_parameters(T, eps, s, theta);
  json report = to_json(p);
  report["T"] = T;
  report["eps"] = eps;
  report["s"] = s;
  report["theta"] = theta;

  // with a configured operator, tabulate the actual scaled norms
  if (!o.config_path.empty() || !o.overrides.empty()) {
    SimConfig cfg = resolve_config(o);
    if (auto op = build_operator_spec(cfg)) {
      json table = json::array();
      for (double lambda : {2.0, 4.0, 8.0}) {
        HSOperator sc = scale_operator(*op, lambda);
        table.push_back(
            {{"lambda", lambda},
             {"hs_s", hs_norm(sc, s, true)},
             {"hs_h1", hs_norm(sc, 1.0, true)},
             {"hs_h34", hs_norm(sc, 0.75, true)},
             {"y6_product", p.lambda * std::sqrt(T) * hs_norm(sc, 1.0, true)},
             {"y6a_product",
              p.lambda * std::sqrt(T) * hs_norm(sc, 0.75, true)}});
      }
      report["scaled_operator_table"] = table;
    }
    write_provenance(dir, cfg, {}, {"scaling_report.json"});
  }
  write_json(dir / "scaling_report.json", report);
  std::cout << "scaling-check: N = " << p.N << ", lambda = " << p.lambda
            << " (raw " << p.lambda_raw << ")\n"
            << "  y1 = " << p.y1_factor << ", y6 = " << p.y6_factor
            << ", y6a = " << p.y6a_factor << "\n";
  return kExitOk;
}

int cmd_xsb_norm(const CommonOpts& o, double s, double b, double margin,
                 bool grad_smoothed) {
  SimConfig cfg = resolve_config(o);
  cfg.save_stride = 1;
  const fs::path dir = prepare_out(o);
  Trajectory traj = run(cfg);
  std::vector<double> weight;
  if (grad_smoothed) {
    IMultiplier im = build_multiplier(cfg.N, cfg.s, cfg.grid, cfg.profile);
    weight.resize(cfg.grid.points());
    for_each_mode(cfg.grid, [&](std::size_t lin, double a, double bb, double c) {
      weight[lin] = std::sqrt(a * a + bb * bb + c * c) * im.values[lin];
    });
  }
  SpaceTimeField st = spacetime_from_trajectory(
      traj, 0.0, traj.final_time(), weight.empty() ? nullptr : &weight);
  WindowSpec window{margin};
  const double value = xsb_norm(st, s, b, window);
  json report{{"s", s},
              {"b", b},
              {"taper_margin", margin},
              {"grad_smoothed", grad_smoothed},
              {"window", {st.t0, st.t0 + st.window_length()}},
              {"value", value}};
  write_json(dir / "xsb_report.json", report);
  write_provenance(dir, cfg, {cfg.seed}, {"xsb_report.json"});
  std::cout << "xsb-norm: " << value << "\n";
  return kExitOk;
}

int cmd_gwp(const CommonOpts& o, double T, double eps, double s, double theta,
            std::vector<double> n_list, std::size_t ledger_paths) {
  SimConfig base = resolve_config(o);
  const fs::path dir = prepare_out(o);
  GwpOptions opt;
  opt.n_list = n_list;
  opt.paths = o.paths;
  opt.ledger_paths = ledger_paths;
  opt.threads = o.threads;
  opt.seed_base = base.seed;
  GwpReport rep = gwp_pipeline(T, eps, s, theta, base, opt);
  write_json(dir / "gwp_report.json", to_json(rep));

  std::vector<double> ns, lams, stops, viols, e0s, comm;
  for (const auto& rr : rep.runs) {
    ns.push_back(rr.N);
    lams.push_back(rr.lambda);
    stops.push_back(rr.stopping_fraction);
    viols.push_back(rr.window_violation_fraction);
    e0s.push_back(rr.e0_scaled);
    comm.push_back(rr.mean_commutator_abs);
  }
  write_csv(dir / "term_table.csv",
            {"N", "lambda", "stopping_fraction", "window_violation_fraction",
             "e0_scaled", "mean_commutator_abs"},
            {ns, lams, stops, viols, e0s, comm});
  write_provenance(dir, base, {}, {"gwp_report.json", "term_table.csv"});
  std::cout << "gwp-pipeline: recommended N = " << rep.recommended.N
            << ", lambda = " << rep.recommended.lambda
            << "; worst failure fraction " << rep.failure_fraction_total
            << " vs eps " << eps << "\n";
  return rep.within_budget ? kExitOk : kExitBudget;
}

int cmd_converge(const CommonOpts& o, const std::string& axis,
                 std::vector<double> dts, std::vector<int> grids,
                 double expect_order) {
  SimConfig cfg = resolve_config(o);
  const fs::path dir = prepare_out(o);
  ConvergenceStudy st;
  if (axis == "dt") {
    if (dts.empty()) dts = {4 * cfg.dt, 2 * cfg.dt, cfg.dt};
    st = convergence_study_dt(cfg, dts);
  } else if (axis == "grid") {
    if (grids.empty())
      grids = {cfg.grid.n[0], cfg.grid.n[0] * 3 / 2, cfg.grid.n[0] * 2};
    st = convergence_study_grid(cfg, grids);
  } else {
    throw ConfigError("converge: --axis must be dt or grid");
  }
  write_csv(dir / "convergence.csv", {"h", "error"}, {st.h, st.errors});
  json report{{"axis", axis},
              {"h", st.h},
              {"errors", st.errors},
              {"order", st.order}};
  const bool ok = expect_order <= 0 || st.order >= expect_order;
  report["expect_order"] = expect_order;
  report["within_budget"] = ok;
  write_json(dir / "convergence_report.json", report);
  write_provenance(dir, cfg, {cfg.seed},
                   {"convergence_report.json", "convergence.csv"});
  std::cout << "converge(" << axis << "): order " << st.order << "\n";
  return ok ? kExitOk : kExitBudget;
}

int cmd_plot(const std::string& csv, std::vector<std::string> ycols,
             const std::string& xcol, const std::string& out_svg,
             const std::string& out_dir) {
  CsvData data = read_csv(csv);
  auto col_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < data.headers.size(); ++i)
      if (data.headers[i] == name) return i;
    throw ConfigError("plot: no column named " + name);
  };
  const std::size_t xi = col_index(xcol.empty() ? data.headers.at(0) : xcol);
  if (ycols.empty())
    for (std::size_t i = 0; i < data.headers.size(); ++i)
      if (i != xi) ycols.push_back(data.headers[i]);
  fs::path dir(out_dir);
  fs::create_directories(dir);
  std::vector<std::vector<double>> series;
  for (const auto& name : ycols) {
    series.push_back(data.columns[col_index(name)]);
    write_csv(dir / (name + ".dat"), {data.headers[xi], name},
              {data.columns[xi], series.back()});
  }
  if (!out_svg.empty())
    write_svg_lineplot(dir / out_svg, data.columns[xi], series, ycols,
                       fs::path(csv).filename().string());
  std::cout << "plot: " << series.size() << " series from " << csv << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Pseudospectral simulation and diagnostics for the stochastic "
      "defocusing cubic Schrodinger flow on a periodic box"};
  app.require_subcommand(1);

  CommonOpts o;
  double gwp_T = 0.25, gwp_eps = 0.25, gwp_s = 0.9, gwp_theta = 0.01;
  std::vector<double> n_list;
  std::size_t ledger_paths = 4;
  double slope_budget = -0.8;
  double xsb_s = 0.0, xsb_b = 0.45, taper_margin = 0.10;
  bool grad_smoothed = false;
  std::string axis = "dt", plot_csv, plot_x, plot_svg = "plot.svg";
  std::vector<std::string> plot_y;
  std::vector<double> dts;
  std::vector<int> grids;
  double expect_order = 0.0;

  auto* sim = app.add_subcommand("simulate", "run trajectories and write series/snapshots");
  add_common(sim, o);

  auto* noise = app.add_subcommand("sample-noise", "noise statistics and stochastic convolution moments");
  add_common(noise, o);

  auto* ito = app.add_subcommand("ito-check", "per-path energy-ledger terms and residuals");
  add_common(ito, o);

  auto* decay = app.add_subcommand("commutator-decay", "pairing magnitude against the cutoff");
  add_common(decay, o);
  decay->add_option("--N-list", n_list, "cutoff ladder (default 4 8 16 32)")->delimiter(',');
  decay->add_option("--slope-budget", slope_budget, "largest acceptable log-log slope");

  auto* scal = app.add_subcommand("scaling-check", "(N, lambda) selection table and smallness products");
  add_common(scal, o);
  scal->add_option("--T", gwp_T, "target horizon");
  scal->add_option("--eps", gwp_eps, "failure budget");
  scal->add_option("--s", gwp_s, "regularity");
  scal->add_option("--theta", gwp_theta, "selection margin");

  auto* xsb = app.add_subcommand("xsb-norm", "windowed space-time norm of a run");
  add_common(xsb, o);
  xsb->add_option("--s", xsb_s, "spatial weight exponent");
  xsb->add_option("--b", xsb_b, "modulation weight exponent");
  xsb->add_option("--taper-margin", taper_margin, "cosine taper fraction");
  xsb->add_flag("--grad-smoothed", grad_smoothed,
                "measure grad I_N u instead of u");

  auto* gwp = app.add_subcommand("gwp-pipeline", "globalization pipeline with term accounting");
  add_common(gwp, o);
  gwp->add_option("--T", gwp_T, "target horizon");
  gwp->add_option("--eps", gwp_eps, "failure budget");
  gwp->add_option("--s", gwp_s, "regularity");
  gwp->add_option("--theta", gwp_theta, "selection margin");
  gwp->add_option("--N-list", n_list, "cutoff ladder override")->delimiter(',');
  gwp->add_option("--ledger-paths", ledger_paths, "instrumented paths per rung");

  auto* conv = app.add_subcommand("converge", "dt or grid refinement study");
  add_common(conv, o);
  conv->add_option("--axis", axis, "dt or grid");
  conv->add_option("--dt-list", dts, "dt ladder (coarse to fine)")->delimiter(',');
  conv->add_option("--grid-list", grids, "grid ladder (coarse to fine)")->delimiter(',');
  conv->add_option("--expect-order", expect_order, "flag runs fitting below this order");

  auto* plot = app.add_subcommand("plot", "two-column data files and an SVG line plot from CSV");
  plot->add_option("--csv", plot_csv, "input CSV")->required();
  plot->add_option("--x", plot_x, "abscissa column (default: first)");
  plot->add_option("--y", plot_y, "ordinate columns (default: all others)")->delimiter(',');
  plot->add_option("--svg", plot_svg, "SVG file name (empty to skip)");
  plot->add_option("--out", o.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (noise->parsed()) return cmd_sample_noise(o);
    if (ito->parsed()) return cmd_ito_check(o);
    if (decay->parsed()) return cmd_commutator_decay(o, n_list, slope_budget);
    if (scal->parsed()) return cmd_scaling_check(o, gwp_T, gwp_eps, gwp_s, gwp_theta);
    if (xsb->parsed()) return cmd_xsb_norm(o, xsb_s, xsb_b, taper_margin, grad_smoothed);
    if (gwp->parsed())
      return cmd_gwp(o, gwp_T, gwp_eps, gwp_s, gwp_theta, n_list, ledger_paths);
    if (conv->parsed()) return cmd_converge(o, axis, dts, grids, expect_order);
    if (plot->parsed())
      return cmd_plot(plot_csv, plot_y, plot_x, plot_svg, o.out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RegularityOutOfRange& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
