#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>

#include "snls/convolution.hpp"
#include "snls/i_operator.hpp"

namespace snls {

enum class Scheme { strang, lie, exp_euler_stochastic };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::strang: return "strang";
    case Scheme::lie: return "lie";
    case Scheme::exp_euler_stochastic: return "exp_euler_stochastic";
  }
  return "?";
}

struct InitialDataSpec {
  enum class Kind { zero, plane_wave, smooth_multimode, hs_random, file, explicit_field };
  Kind kind = Kind::smooth_multimode;
  double amplitude = 0.25;
  int kmax = 2;                    // smooth_multimode band half-width
  double decay = 2.0;              // hs_random: |coef| ~ <xi>^(-decay)
  double norm_value = 1.0;         // hs_random: target H^(norm_s) norm
  double norm_s = 0.9;
  std::array<int, 3> wave_k{1, 0, 0};
  std::uint64_t data_seed = 42;
  std::string file;
  std::shared_ptr<const Field> explicit_field;
};

struct NoiseSpec {
  enum class Kind { off, fourier_decay, separable_file, dense_file, explicit_op };
  Kind kind = Kind::off;
  double sigma = 2.5;
  double amplitude = 0.1;
  std::string g_file, h_file;  // separable kernel factors (ACLF fields)
  std::string kernel_file;     // dense kernel (ACLF matrix layout)
  std::shared_ptr<const HSOperator> explicit_op;
};

struct SimConfig {
  Grid grid = Grid::cubic(3, 16, 2.0 * std::numbers::pi);
  double s = 0.9;
  double N = 8.0;
  TransitionProfile profile = TransitionProfile::cubic_smoothstep;
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::strang;
  InitialDataSpec data;
  NoiseSpec noise;
  std::uint64_t seed = 1;
  double lambda = 1.0;  // scaling factor this run was derived with
  double blowup_threshold = 1e6;
  int save_stride = 0;  // 0: endpoints only, k > 0: every k-th step
  bool retain_path = false;
  bool nonlinear = true;  // false: pure linear stochastic flow
  double eta0 = 0.25;
  double eta1 = 0.25;

  std::size_t steps() const {
    return static_cast<std::size_t>(std::llround(t_end / dt));
  }
};

/// Initial data on the configured grid, spectral and dealiased.
inline Field build_initial_data(const SimConfig& cfg) {
  const Grid& g = cfg.grid;
  Field u = Field::zeros(g, Rep::spectral);
  const auto& d = cfg.data;
  switch (d.kind) {
    case InitialDataSpec::Kind::zero:
      break;
    case InitialDataSpec::Kind::plane_wave: {
      // amplitude a at the requested lattice mode: spectral entry a sqrt(P)
      int idx[3] = {0, 0, 0};
      for (int a = 0; a < 3; ++a) {
        int k = a < g.dim ? d.wave_k[a] : 0;
        idx[a] = k >= 0 ? k : k + g.n[a];
      }
      u.v[linear_index(g, idx[0], idx[1], idx[2])] =
          d.amplitude * std::sqrt(double(g.points()));
      break;
    }
    case InitialDataSpec::Kind::smooth_multimode: {
      // low-mode cocktail with RMS point value ~ amplitude, deterministic
      // in the data seed
      GaussianRng rng(d.data_seed);
      std::size_t band = 0;
      for_each_mode(g, [&](std::size_t lin, double, double, double) {
        const ModeIndex m = decompose(g, lin);
        const int k0 = g.k_index(0, m.i0), k1 = g.k_index(1, m.i1),
                  k2 = g.k_index(2, m.i2);
        if (std::abs(k0) <= d.kmax && std::abs(k1) <= d.kmax &&
            std::abs(k2) <= d.kmax) {
          u.v[lin] = cplx{rng.normal(), rng.normal()};
          ++band;
        }
      });
      const double scale =
          d.amplitude * std::sqrt(double(g.points()) / double(band));
      for (auto& z : u.v) z *= scale;
      break;
    }
    case InitialDataSpec::Kind::hs_random: {
      GaussianRng rng(d.data_seed);
      for_each_mode(g, [&](std::size_t lin, double a, double b, double c) {
        const double xi2 = a * a + b * b + c * c;
        const double amp = std::pow(1.0 + xi2, -d.decay / 2.0);
        u.v[lin] = amp * cplx{rng.normal(), rng.normal()};
      });
      dealias_inplace_spectral(u);
      const double ns = sobolev_norm(u, d.norm_s, false);
      if (ns > 0)
        for (auto& z : u.v) z *= d.norm_value / ns;
      break;
    }
    case InitialDataSpec::Kind::file:
      throw ConfigError("initial data from file must be resolved by the caller");
    case InitialDataSpec::Kind::explicit_field: {
      if (!d.explicit_field) throw ConfigError("missing explicit initial field");
      if (d.explicit_field->grid != g)
        throw GridMismatch("explicit initial field grid");
      u = transform(*d.explicit_field, Rep::spectral);
      break;
    }
  }
  dealias_inplace_spectral(u);
  return u;
}

/// Forcing operator of a run; diagonal so the linear noise update is exact.
/// Kernel-file operators are for diagnostics (norms, scaling) and are
/// rejected here.
inline std::optional<HSOperator> build_noise_operator(const SimConfig& cfg) {
  switch (cfg.noise.kind) {
    case NoiseSpec::Kind::off:
      return std::nullopt;
    case NoiseSpec::Kind::fourier_decay:
      return decay_operator(cfg.grid, cfg.noise.sigma, cfg.noise.amplitude);
    case NoiseSpec::Kind::separable_file:
    case NoiseSpec::Kind::dense_file:
      throw ConfigError("run forcing must be Fourier-diagonal; "
                        "kernel-file operators are diagnostic-only");
    case NoiseSpec::Kind::explicit_op: {
      if (!cfg.noise.explicit_op) throw ConfigError("missing explicit operator");
      if (!std::holds_alternative<FourierDiagonal>(*cfg.noise.explicit_op))
        throw ConfigError("run forcing must be Fourier-diagonal");
      return *cfg.noise.explicit_op;
    }
  }
  return std::nullopt;
}

struct Trajectory {
  enum class Status { completed, blowup };
  // per-step series, sampled at every step boundary including t = 0
  std::vector<double> times;
  std::vector<double> mass_series;
  std::vector<double> energy_series;
  std::vector<double> energy_i_series;  // E(I_N u)
  std::vector<double> hs_series;        // |u|_{H^s}
  std::vector<double> h1_i_series;      // |I_N u|_{H^1-dot}
  std::vector<double> snapshot_times;
  std::vector<Field> snapshots;  // spectral
  std::optional<WienerPath> path;
  Status status = Status::completed;
  double blowup_time = -1.0;
  SimConfig config;

  double final_time() const { return times.empty() ? 0.0 : times.back(); }
};

namespace detail {

struct StepTables {
  std::vector<cplx> phase_half, phase_full;
  std::vector<double> xi2;
  std::vector<double> m;       // smoothing multiplier values
  std::vector<double> ws_inh;  // <xi>^(2s)
  std::vector<cplx> inj;       // noise injection amplitudes (or empty)
  std::vector<bool> keep;      // dealias mask
  double cell = 1.0;
};

inline StepTables make_tables(const SimConfig& cfg, const IMultiplier& im,
                              const std::optional<HSOperator>& op) {
  StepTables t;
  const Grid& g = cfg.grid;
  const std::size_t P = g.points();
  t.phase_half.resize(P);
  t.phase_full.resize(P);
  t.xi2.resize(P);
  t.ws_inh.resize(P);
  t.keep.resize(P);
  t.cell = g.cell();
  for_each_mode(g, [&](std::size_t lin, double a, double b, double c) {
    const double xi2 = a * a + b * b + c * c;
    t.xi2[lin] = xi2;
    const double ph = -xi2 * cfg.dt;
    t.phase_full[lin] = cplx{std::cos(ph), std::sin(ph)};
    t.phase_half[lin] = cplx{std::cos(ph / 2), std::sin(ph / 2)};
    t.ws_inh[lin] = std::pow(1.0 + xi2, cfg.s);
    t.keep[lin] = dealias_keeps(g, lin);
  });
  t.m = im.values;
  if (op) t.inj = injection_amplitudes(std::get<FourierDiagonal>(*op));
  return t;
}

// One deterministic step on the raw spectral vector. `phys` is scratch.
// The state is projected back onto the two-thirds band after the nonlinear
// substep: the retained-band dynamics is then closed (the grid energy of
// the projected flow is exactly conserved in continuous time), and for
// resolved data the projection acts below roundoff.
inline void det_step(std::vector<cplx>& u, std::vector<cplx>& phys,
                     const StepTables& t, const SimConfig& cfg,
                     const Grid& g) {
  const std::size_t P = u.size();
  auto nonlinear_rotation = [&](double dt) {
    fft::backward(g, u.data(), phys.data());
    for (std::size_t i = 0; i < P; ++i) {
      const double m2 = std::norm(phys[i]);
      phys[i] *= cplx{std::cos(dt * m2), -std::sin(dt * m2)};
    }
    fft::forward(g, phys.data(), u.data());
    for (std::size_t i = 0; i < P; ++i)
      if (!t.keep[i]) u[i] = cplx{0, 0};
  };
  switch (cfg.scheme) {
    case Scheme::strang:
      for (std::size_t i = 0; i < P; ++i) u[i] *= t.phase_half[i];
      nonlinear_rotation(cfg.dt);
      for (std::size_t i = 0; i < P; ++i) u[i] *= t.phase_half[i];
      break;
    case Scheme::lie:
      for (std::size_t i = 0; i < P; ++i) u[i] *= t.phase_full[i];
      nonlinear_rotation(cfg.dt);
      break;
    case Scheme::exp_euler_stochastic: {
      // u <- S(dt) (u - i dt P(|u|^2 u)) with the dealiased cubic
      fft::backward(g, u.data(), phys.data());
      for (std::size_t i = 0; i < P; ++i) phys[i] *= std::norm(phys[i]);
      std::vector<cplx> cub(P);
      fft::forward(g, phys.data(), cub.data());
      const cplx minus_i{0.0, -1.0};
      for (std::size_t i = 0; i < P; ++i) {
        if (!t.keep[i]) cub[i] = cplx{0, 0};
        u[i] = t.phase_full[i] * (u[i] + minus_i * cfg.dt * cub[i]);
      }
      break;
    }
  }
}

}  // namespace detail

/// One deterministic time step (public, field-level).
inline Field step_deterministic(const Field& f, double dt, Scheme scheme) {
  require_finite(f, "step_deterministic");
  SimConfig cfg;
  cfg.grid = f.grid;
  cfg.dt = dt;
  cfg.scheme = scheme;
  const IMultiplier im = build_multiplier(1.0, 0.5, f.grid);
  detail::StepTables t = detail::make_tables(cfg, im, std::nullopt);
  Field out = transform(f, Rep::spectral);
  std::vector<cplx> phys(out.v.size());
  detail::det_step(out.v, phys, t, cfg, f.grid);
  if (!out.finite()) throw BlowUpDetected(dt);
  if (f.rep == Rep::physical) convert(out, Rep::physical);
  return out;
}

/// One stochastic step: deterministic step, then the exact linear noise
/// increment exp(-i |xi|^2 dt) (-i) g dbeta, matching the stochastic
/// convolution recursion (so the zero-nonlinearity limit is exact).
inline Field step_stochastic(const Field& f, double dt, const HSOperator& op,
                             std::span<const cplx> dbeta,
                             Scheme scheme = Scheme::strang) {
  if (operator_grid(op) != f.grid) throw GridMismatch("step_stochastic");
  if (dbeta.size() != f.grid.points())
    throw GridMismatch("step_stochastic: increment count");
  Field out = step_deterministic(f, dt, scheme);
  convert(out, Rep::spectral);
  const auto& diag = std::get<FourierDiagonal>(op);
  const std::vector<cplx> g = injection_amplitudes(diag);
  const cplx minus_i{0.0, -1.0};
  for_each_mode(f.grid, [&](std::size_t lin, double a, double b, double c) {
    const double ph = -(a * a + b * b + c * c) * dt;
    out.v[lin] += cplx{std::cos(ph), std::sin(ph)} * minus_i * g[lin] *
                  dbeta[lin];
  });
  if (!out.finite()) throw BlowUpDetected(dt);
  if (f.rep == Rep::physical) convert(out, Rep::physical);
  return out;
}

/// Full trajectory of the configured run. The evolved variable is u itself;
/// smoothed quantities are derived observables. Deterministic for a fixed
/// config and seed regardless of caller threading.
inline Trajectory run(const SimConfig& cfg,
                      const WienerPath* external_path = nullptr) {
  if (!(cfg.dt > 0) || !(cfg.t_end > 0) || !(cfg.blowup_threshold > 0) ||
      !(cfg.eta0 > 0) || !(cfg.eta1 > 0))
    throw ConfigError("run: dt, t_end, blowup_threshold, eta0, eta1 must be positive");
  const Grid& g = cfg.grid;
  const std::size_t P = g.points();
  const std::size_t steps = cfg.steps();

  const IMultiplier im = build_multiplier(cfg.N, cfg.s, g, cfg.profile);
  const std::optional<HSOperator> op = build_noise_operator(cfg);
  detail::StepTables t = detail::make_tables(cfg, im, op);

  Trajectory traj;
  traj.config = cfg;
  Field u0 = build_initial_data(cfg);
  std::vector<cplx> u = u0.v;
  std::vector<cplx> phys(P);

  // noise source: external shared path, retained path, or stream
  std::optional<WienerStream> stream;
  std::optional<WienerPath> own_path;
  const WienerPath* path = external_path;
  if (op) {
    if (external_path) {
      if (external_path->modes != P || external_path->steps < steps ||
          std::abs(external_path->dt - cfg.dt) > 1e-15 * cfg.dt)
        throw GridMismatch("run: external path does not match config");
    } else if (cfg.retain_path) {
      own_path = sample_wiener(cfg.seed, cfg.dt, steps, g);
      path = &*own_path;
    } else {
      stream.emplace(cfg.seed, cfg.dt, P);
    }
  }
  std::vector<cplx> dbeta(op ? P : 0);

  const std::size_t stride =
      cfg.save_stride > 0 ? std::size_t(cfg.save_stride) : std::max<std::size_t>(steps, 1);

  auto record = [&](std::size_t j) {
    const double cell = t.cell;
    double m2 = 0, grad2 = 0, grad2_i = 0, hs2 = 0;
    for (std::size_t i = 0; i < P; ++i) {
      const double a2 = std::norm(u[i]);
      m2 += a2;
      grad2 += t.xi2[i] * a2;
      grad2_i += t.xi2[i] * t.m[i] * t.m[i] * a2;
      hs2 += t.ws_inh[i] * a2;
    }
    // quartic terms need point values of u and of I_N u
    fft::backward(g, u.data(), phys.data());
    double l4 = 0;
    for (std::size_t i = 0; i < P; ++i) {
      const double a2 = std::norm(phys[i]);
      l4 += a2 * a2;
    }
    std::vector<cplx> iu(P);
    for (std::size_t i = 0; i < P; ++i) iu[i] = t.m[i] * u[i];
    fft::backward(g, iu.data(), iu.data());
    double l4_i = 0;
    for (std::size_t i = 0; i < P; ++i) {
      const double a2 = std::norm(iu[i]);
      l4_i += a2 * a2;
    }
    traj.times.push_back(double(j) * cfg.dt);
    traj.mass_series.push_back(cell * m2);
    traj.energy_series.push_back(0.5 * cell * grad2 + 0.25 * cell * l4);
    traj.energy_i_series.push_back(0.5 * cell * grad2_i + 0.25 * cell * l4_i);
    traj.hs_series.push_back(std::sqrt(cell * hs2));
    traj.h1_i_series.push_back(std::sqrt(cell * grad2_i));
    if (j % stride == 0 || j == steps) {
      Field snap;
      snap.grid = g;
      snap.rep = Rep::spectral;
      snap.v = u;
      traj.snapshot_times.push_back(double(j) * cfg.dt);
      traj.snapshots.push_back(std::move(snap));
    }
  };

  record(0);
  const cplx minus_i{0.0, -1.0};
  for (std::size_t j = 0; j < steps; ++j) {
    std::span<const cplx> inc;
    if (op) {
      if (path) {
        inc = path->step(j);
      } else {
        stream->next_step(dbeta);
        inc = dbeta;
      }
    }
    if (!cfg.nonlinear) {
      // exact linear flow, arithmetic aligned with the stochastic
      // convolution recursion so the noise-only limit is bit-identical
      if (op)
        for (std::size_t i = 0; i < P; ++i)
          u[i] = t.phase_full[i] * (u[i] + minus_i * t.inj[i] * inc[i]);
      else
        for (std::size_t i = 0; i < P; ++i) u[i] *= t.phase_full[i];
    } else {
      detail::det_step(u, phys, t, cfg, g);
      if (op)
        for (std::size_t i = 0; i < P; ++i)
          u[i] += t.phase_full[i] * minus_i * t.inj[i] * inc[i];
    }
    record(j + 1);
    const double h1i = traj.h1_i_series.back();
    if (!std::isfinite(h1i) || h1i > cfg.blowup_threshold) {
      traj.status = Trajectory::Status::blowup;
      traj.blowup_time = double(j + 1) * cfg.dt;
      break;
    }
  }
  if (cfg.retain_path && own_path) traj.path = std::move(own_path);
  if (cfg.retain_path && external_path) traj.path = *external_path;
  return traj;
}

/// First sample time at which the running sup of E(I_N u) reaches eta0.
inline std::optional<double> stopping_time(const Trajectory& traj,
                                           double eta0) {
  double running = -1.0;
  for (std::size_t i = 0; i < traj.energy_i_series.size(); ++i) {
    running = std::max(running, traj.energy_i_series[i]);
    if (running >= eta0) return traj.times[i];
  }
  return std::nullopt;
}

}  // namespace snls
