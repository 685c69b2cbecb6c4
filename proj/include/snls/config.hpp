#pragma once

#include <cstdlib>

#include "snls/integrator.hpp"
#include "snls/io.hpp"

namespace snls {

inline constexpr const char* kCodeVersion = "0.1.0";

namespace cfg_detail {

inline double to_double(const ConfigMap& m, const std::string& key, double dflt) {
  auto it = m.find(key);
  if (it == m.end()) return dflt;
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str())
    throw ConfigError("config: bad number for " + key + ": " + it->second);
  return v;
}

inline long long to_int(const ConfigMap& m, const std::string& key, long long dflt) {
  auto it = m.find(key);
  if (it == m.end()) return dflt;
  char* end = nullptr;
  const long long v = std::strtoll(it->second.c_str(), &end, 10);
  if (end == it->second.c_str())
    throw ConfigError("config: bad integer for " + key + ": " + it->second);
  return v;
}

inline std::uint64_t to_u64(const ConfigMap& m, const std::string& key,
                            std::uint64_t dflt) {
  auto it = m.find(key);
  if (it == m.end()) return dflt;
  return std::strtoull(it->second.c_str(), nullptr, 10);
}

inline std::string to_str(const ConfigMap& m, const std::string& key,
                          const std::string& dflt) {
  auto it = m.find(key);
  return it == m.end() ? dflt : it->second;
}

}  // namespace cfg_detail

/// Builds the run configuration from a parsed document; unknown keys are
/// rejected so typos fail loudly.
inline SimConfig to_sim_config(const ConfigMap& m) {
  using namespace cfg_detail;
  static const std::vector<std::string> known = {
      "grid.dim", "grid.n", "grid.L",
      "model.s", "model.N", "model.profile", "model.nonlinear",
      "time.dt", "time.t_end", "time.scheme", "time.save_stride",
      "noise.kind", "noise.sigma", "noise.amplitude",
      "noise.g_file", "noise.h_file", "noise.kernel_file",
      "data.kind", "data.amplitude", "data.kmax", "data.decay",
      "data.norm_value", "data.norm_s", "data.seed", "data.file",
      "data.k0", "data.k1", "data.k2",
      "run.seed", "run.blowup_threshold", "run.eta0", "run.eta1",
      "run.retain_path", "run.lambda"};
  for (const auto& [k, v] : m) {
    bool ok = false;
    for (const auto& kk : known) ok = ok || kk == k;
    if (!ok) throw ConfigError("config: unknown key " + k);
  }

  SimConfig c;
  const int dim = int(to_int(m, "grid.dim", 3));
  const int n = int(to_int(m, "grid.n", 16));
  const double L = to_double(m, "grid.L", 2.0 * std::numbers::pi);
  c.grid = Grid::cubic(dim, n, L);
  c.s = to_double(m, "model.s", 0.9);
  c.N = to_double(m, "model.N", 8.0);
  const std::string prof = to_str(m, "model.profile", "cubic");
  if (prof == "cubic")
    c.profile = TransitionProfile::cubic_smoothstep;
  else if (prof == "quadratic")
    c.profile = TransitionProfile::quadratic_blend;
  else
    throw ConfigError("config: model.profile must be cubic or quadratic");
  c.nonlinear = to_int(m, "model.nonlinear", 1) != 0;
  c.dt = to_double(m, "time.dt", 1e-3);
  c.t_end = to_double(m, "time.t_end", 1.0);
  const std::string scheme = to_str(m, "time.scheme", "strang");
  if (scheme == "strang")
    c.scheme = Scheme::strang;
  else if (scheme == "lie")
    c.scheme = Scheme::lie;
  else if (scheme == "exp_euler_stochastic")
    c.scheme = Scheme::exp_euler_stochastic;
  else
    throw ConfigError("config: unknown time.scheme " + scheme);
  c.save_stride = int(to_int(m, "time.save_stride", 0));

  const std::string nk = to_str(m, "noise.kind", "off");
  if (nk == "off")
    c.noise.kind = NoiseSpec::Kind::off;
  else if (nk == "fourier_decay")
    c.noise.kind = NoiseSpec::Kind::fourier_decay;
  else if (nk == "separable_file")
    c.noise.kind = NoiseSpec::Kind::separable_file;
  else if (nk == "dense_file")
    c.noise.kind = NoiseSpec::Kind::dense_file;
  else
    throw ConfigError("config: unknown noise.kind " + nk);
  c.noise.sigma = to_double(m, "noise.sigma", 2.5);
  c.noise.amplitude = to_double(m, "noise.amplitude", 0.1);
  c.noise.g_file = to_str(m, "noise.g_file", "");
  c.noise.h_file = to_str(m, "noise.h_file", "");
  c.noise.kernel_file = to_str(m, "noise.kernel_file", "");

  const std::string dk = to_str(m, "data.kind", "smooth_multimode");
  if (dk == "zero")
    c.data.kind = InitialDataSpec::Kind::zero;
  else if (dk == "plane_wave")
    c.data.kind = InitialDataSpec::Kind::plane_wave;
  else if (dk == "smooth_multimode")
    c.data.kind = InitialDataSpec::Kind::smooth_multimode;
  else if (dk == "hs_random")
    c.data.kind = InitialDataSpec::Kind::hs_random;
  else if (dk == "file")
    c.data.kind = InitialDataSpec::Kind::file;
  else
    throw ConfigError("config: unknown data.kind " + dk);
  c.data.amplitude = to_double(m, "data.amplitude", 0.25);
  c.data.kmax = int(to_int(m, "data.kmax", 2));
  c.data.decay = to_double(m, "data.decay", 2.0);
  c.data.norm_value = to_double(m, "data.norm_value", 1.0);
  c.data.norm_s = to_double(m, "data.norm_s", 0.9);
  c.data.data_seed = to_u64(m, "data.seed", 42);
  c.data.file = to_str(m, "data.file", "");
  c.data.wave_k = {int(to_int(m, "data.k0", 1)), int(to_int(m, "data.k1", 0)),
                   int(to_int(m, "data.k2", 0))};

  c.seed = to_u64(m, "run.seed", 1);
  c.blowup_threshold = to_double(m, "run.blowup_threshold", 1e6);
  c.eta0 = to_double(m, "run.eta0", 0.25);
  c.eta1 = to_double(m, "run.eta1", 0.25);
  c.retain_path = to_int(m, "run.retain_path", 0) != 0;
  c.lambda = to_double(m, "run.lambda", 1.0);

  if (c.data.kind == InitialDataSpec::Kind::file) {
    if (c.data.file.empty()) throw ConfigError("config: data.file required");
    auto f = std::make_shared<Field>(read_field_aclf(c.data.file));
    c.data.kind = InitialDataSpec::Kind::explicit_field;
    c.data.explicit_field = f;
  }
  return c;
}

/// Provenance view of a configuration (also the hashing basis).
inline ConfigMap from_sim_config(const SimConfig& c) {
  ConfigMap m;
  m["grid.dim"] = std::to_string(c.grid.dim);
  m["grid.n"] = std::to_string(c.grid.n[0]);
  m["grid.L"] = format_full(c.grid.box[0]);
  m["model.s"] = format_full(c.s);
  m["model.N"] = format_full(c.N);
  m["model.profile"] =
      c.profile == TransitionProfile::cubic_smoothstep ? "cubic" : "quadratic";
  m["model.nonlinear"] = c.nonlinear ? "1" : "0";
  m["time.dt"] = format_full(c.dt);
  m["time.t_end"] = format_full(c.t_end);
  m["time.scheme"] = scheme_name(c.scheme);
  m["time.save_stride"] = std::to_string(c.save_stride);
  switch (c.noise.kind) {
    case NoiseSpec::Kind::off: m["noise.kind"] = "off"; break;
    case NoiseSpec::Kind::fourier_decay: m["noise.kind"] = "fourier_decay"; break;
    case NoiseSpec::Kind::separable_file: m["noise.kind"] = "separable_file"; break;
    case NoiseSpec::Kind::dense_file: m["noise.kind"] = "dense_file"; break;
    case NoiseSpec::Kind::explicit_op: m["noise.kind"] = "explicit"; break;
  }
  m["noise.sigma"] = format_full(c.noise.sigma);
  m["noise.amplitude"] = format_full(c.noise.amplitude);
  if (!c.noise.g_file.empty()) m["noise.g_file"] = c.noise.g_file;
  if (!c.noise.h_file.empty()) m["noise.h_file"] = c.noise.h_file;
  if (!c.noise.kernel_file.empty()) m["noise.kernel_file"] = c.noise.kernel_file;
  switch (c.data.kind) {
    case InitialDataSpec::Kind::zero: m["data.kind"] = "zero"; break;
    case InitialDataSpec::Kind::plane_wave: m["data.kind"] = "plane_wave"; break;
    case InitialDataSpec::Kind::smooth_multimode:
      m["data.kind"] = "smooth_multimode";
      break;
    case InitialDataSpec::Kind::hs_random: m["data.kind"] = "hs_random"; break;
    case InitialDataSpec::Kind::file:
    case InitialDataSpec::Kind::explicit_field:
      m["data.kind"] = "explicit";
      break;
  }
  m["data.amplitude"] = format_full(c.data.amplitude);
  m["data.kmax"] = std::to_string(c.data.kmax);
  m["data.decay"] = format_full(c.data.decay);
  m["data.norm_value"] = format_full(c.data.norm_value);
  m["data.norm_s"] = format_full(c.data.norm_s);
  m["data.seed"] = std::to_string(c.data.data_seed);
  m["run.seed"] = std::to_string(c.seed);
  m["run.blowup_threshold"] = format_full(c.blowup_threshold);
  m["run.eta0"] = format_full(c.eta0);
  m["run.eta1"] = format_full(c.eta1);
  m["run.retain_path"] = c.retain_path ? "1" : "0";
  m["run.lambda"] = format_full(c.lambda);
  return m;
}

inline std::uint64_t config_hash(const SimConfig& c) {
  return config_hash(from_sim_config(c));
}

/// Operator described by the noise section, including the kernel-file
/// variants the integrator itself cannot consume.
inline std::optional<HSOperator> build_operator_spec(const SimConfig& c) {
  switch (c.noise.kind) {
    case NoiseSpec::Kind::separable_file: {
      if (c.noise.g_file.empty() || c.noise.h_file.empty())
        throw ConfigError("config: separable_file needs noise.g_file and noise.h_file");
      SeparableKernel sk{read_field_aclf(c.noise.g_file),
                         read_field_aclf(c.noise.h_file)};
      return HSOperator{sk};
    }
    case NoiseSpec::Kind::dense_file:
      if (c.noise.kernel_file.empty())
        throw ConfigError("config: dense_file needs noise.kernel_file");
      return HSOperator{read_kernel_aclf(c.noise.kernel_file)};
    default:
      return build_noise_operator(c);
  }
}

}  // namespace snls
