#pragma once

#include <nlohmann/json.hpp>

#include "snls/config.hpp"
#include "snls/pipeline.hpp"

namespace snls {

using json = nlohmann::ordered_json;

inline json to_json(const MeanCi& m) {
  return json{{"mean", m.mean},
              {"stddev", m.stddev},
              {"half_width95", m.half_width95},
              {"n", m.n}};
}

inline json to_json(const GrowthReport& g) {
  return json{{"exponent", g.exponent},
              {"exponent_stderr", g.exponent_stderr},
              {"r2", g.r2},
              {"linear_slope", g.linear_slope},
              {"final_value", g.final_value},
              {"sup_value", g.sup_value}};
}

inline json to_json(const PathSummary& p) {
  json j{{"seed", p.seed},
         {"blew_up", p.blew_up},
         {"sup_mass", p.sup_mass},
         {"sup_energy_i", p.sup_energy_i},
         {"sup_h1_i", p.sup_h1_i},
         {"final_mass", p.final_mass},
         {"final_hs", p.final_hs},
         {"mass_drift", p.mass_drift}};
  if (p.blew_up) j["blowup_time"] = p.blowup_time;
  if (p.stopping) j["stopping_time"] = *p.stopping;
  return j;
}

inline json to_json(const EnsembleReport& r) {
  json paths = json::array();
  for (const auto& p : r.paths) paths.push_back(to_json(p));
  return json{{"config_hash", hex64(r.config_hash)},
              {"seed_base", r.seed_base},
              {"paths", paths},
              {"sup_mass", to_json(r.sup_mass)},
              {"sup_energy_i", to_json(r.sup_energy_i)},
              {"final_mass_drift", to_json(r.final_mass_drift)},
              {"final_hs", to_json(r.final_hs)},
              {"stopping_fraction", r.stopping_fraction},
              {"stopping_fraction_half95", r.stopping_fraction_half95},
              {"blowup_count", r.blowup_count},
              {"mean_growth", to_json(r.mean_growth)}};
}

inline json to_json(const ItoLedger& l) {
  return json{{"e0", l.e0},
              {"commutator_term", l.commutator_term},
              {"martingale_grad", l.martingale_grad},
              {"martingale_cubic", l.martingale_cubic},
              {"quadratic_trace", l.quadratic_trace},
              {"hs_drift", l.hs_drift},
              {"final_energy", l.final_energy},
              {"sup_energy", l.sup_energy},
              {"tau", l.tau},
              {"residual", l.residual}};
}

inline json to_json(const ItoExpectationReport& r) {
  return json{{"paths", r.paths},
              {"sup_energy", to_json(r.sup_energy)},
              {"martingale_grad", to_json(r.martingale_grad)},
              {"martingale_cubic", to_json(r.martingale_cubic)},
              {"commutator_abs", to_json(r.commutator_abs)},
              {"residual_abs", to_json(r.residual_abs)},
              {"e0", r.e0},
              {"budget_hs_h1", r.budget_hs_h1},
              {"budget_hs_34", r.budget_hs_34},
              {"fitted_constant", r.fitted_constant}};
}

inline json to_json(const ChosenParameters& p) {
  return json{{"N", p.N},
              {"lambda", p.lambda},
              {"lambda_raw", p.lambda_raw},
              {"lambda_exponent", p.lambda_exponent},
              {"horizon_exponent", p.horizon_exponent},
              {"y1_factor", p.y1_factor},
              {"y6_factor", p.y6_factor},
              {"y6a_factor", p.y6a_factor}};
}

inline json to_json(const GwpRunReport& r) {
  json terms = json::array();
  for (const auto& t : r.terms) {
    json row{{"name", t.name}, {"measured", t.measured}};
    if (t.has_analytic) row["analytic"] = t.analytic;
    terms.push_back(row);
  }
  return json{{"N", r.N},
              {"lambda", r.lambda},
              {"horizon", r.horizon},
              {"e0_scaled", r.e0_scaled},
              {"hs_h1_scaled", r.hs_h1_scaled},
              {"hs_34_scaled", r.hs_34_scaled},
              {"stopping_fraction", r.stopping_fraction},
              {"stopping_half95", r.stopping_half95},
              {"window_violation_fraction", r.window_violation_fraction},
              {"windows_checked", r.windows_checked},
              {"mean_commutator_abs", r.mean_commutator_abs},
              {"terms", terms},
              {"ensemble", to_json(r.ensemble)}};
}

inline json to_json(const GwpReport& r) {
  json runs = json::array();
  for (const auto& rr : r.runs) runs.push_back(to_json(rr));
  return json{{"T", r.T},
              {"eps", r.eps},
              {"s", r.s},
              {"theta", r.theta},
              {"eta0", r.eta0},
              {"eta1", r.eta1},
              {"recommended", to_json(r.recommended)},
              {"runs", runs},
              {"failure_fraction_total", r.failure_fraction_total},
              {"within_budget", r.within_budget}};
}

/// Run manifest: deterministic provenance record (no timestamps, so
/// identical runs produce identical bytes).
inline json make_manifest(const SimConfig& cfg,
                          const std::vector<std::uint64_t>& seeds,
                          const std::vector<std::string>& outputs) {
  return json{{"format", "snls-manifest"},
              {"manifest_version", 1},
              {"code_version", kCodeVersion},
              {"config_hash", hex64(config_hash(cfg))},
              {"config", serialize_config(from_sim_config(cfg))},
              {"seeds", seeds},
              {"outputs", outputs}};
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open for writing: " + path.string());
  os << j.dump(2) << "\n";
}

/// Trajectory series as flat CSV: t, M, E, E_I, |u|_{H^s}, |I_N u|_{H1-dot}.
inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const Trajectory& traj) {
  write_csv(path, {"t", "mass", "energy", "energy_i", "hs_norm", "h1_i"},
            {traj.times, traj.mass_series, traj.energy_series,
             traj.energy_i_series, traj.hs_series, traj.h1_i_series});
}

}  // namespace snls
