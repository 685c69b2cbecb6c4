#pragma once

#include <cmath>

#include "snls/integrator.hpp"

namespace snls {

/// Plan for u -> u^lambda(t, x) = lambda^{-1} u(t / lambda^2, x / lambda).
/// The default target grid keeps the mode count and multiplies the box by
/// lambda; mode index k of the source then lands exactly on mode index k of
/// the target (at wavenumber xi/lambda), so the rescaling is lattice-exact
/// for every lambda >= 1. Other target grids zero-pad (exact) or truncate
/// (only behind the interpolation flag).
struct ScalingPlan {
  double lambda = 1.0;
  Grid source;
  Grid target;
  double N = 8.0;
  double s = 0.9;
  double theta = 0.01;
  bool allow_interpolation = false;
};

inline ScalingPlan make_scaling_plan(const Grid& source, double lambda,
                                     double N = 8.0, double s = 0.9,
                                     double theta = 0.01) {
  if (!(lambda >= 1.0)) throw ScalingGridError("scaling: lambda must be >= 1");
  ScalingPlan p;
  p.lambda = lambda;
  p.source = source;
  p.target = source;
  for (int a = 0; a < source.dim; ++a) p.target.box[a] = source.box[a] * lambda;
  p.N = N;
  p.s = s;
  p.theta = theta;
  return p;
}

/// Spectral rescaling: source mode xi maps to target mode xi/lambda with
/// amplitude x lambda^{-1}.
inline Field scale_field(const Field& f, const ScalingPlan& plan) {
  if (f.grid != plan.source) throw GridMismatch("scale_field: source grid");
  for (int a = 0; a < plan.source.dim; ++a) {
    const double want = plan.source.box[a] * plan.lambda;
    if (std::abs(plan.target.box[a] - want) > 1e-12 * want)
      throw ScalingGridError("scale_field: target box must be lambda x source box");
  }
  Field src = transform(f, Rep::spectral);
  const bool same_n = plan.target.n == plan.source.n;
  if (!same_n) {
    for (int a = 0; a < plan.source.dim; ++a)
      if (plan.target.n[a] < plan.source.n[a] && !plan.allow_interpolation)
        throw ScalingGridError(
            "scale_field: mode truncation requires the interpolation flag");
  }
  Field out = Field::zeros(plan.target, Rep::spectral);
  const double amp_fix = std::sqrt(double(plan.target.points()) /
                                   double(plan.source.points()));
  for_each_mode(plan.source, [&](std::size_t lin, double, double, double) {
    const ModeIndex m = decompose(plan.source, lin);
    int idx[3];
    bool fits = true;
    for (int a = 0; a < 3; ++a) {
      const int i = a == 0 ? m.i0 : (a == 1 ? m.i1 : m.i2);
      const int k = plan.source.k_index(a, i);
      if (2 * std::abs(k) >= plan.target.n[a] && k != 0 &&
          !(k == -plan.target.n[a] / 2)) {
        fits = false;
        break;
      }
      idx[a] = k >= 0 ? k : k + plan.target.n[a];
    }
    if (fits)
      out.v[linear_index(plan.target, idx[0], idx[1], idx[2])] =
          src.v[lin] * amp_fix / plan.lambda;
  });
  if (f.rep == Rep::physical) convert(out, Rep::physical);
  return out;
}

/// Globalization parameters for a target horizon T and failure budget eps:
/// the dyadic N clearing T <= c eps N^((6s-5-4theta)/(2s-1)), then
/// lambda = N^((2-2s+2theta)/(2s-1)) rounded to the nearest power of two.
struct ChosenParameters {
  double N = 2;
  double lambda = 1;
  double lambda_raw = 1;
  double lambda_exponent = 0;   // (2-2s+2theta)/(2s-1)
  double horizon_exponent = 0;  // (6s-5-4theta)/(2s-1)
  // predicted smallness factors multiplying |phi| in the relevant class
  double y1_factor = 0;   // N^(2-2s) lambda^(1-2s), initial-energy budget
  double y6_factor = 0;   // N^(1-s) lambda^(1/2-s) T^(1/2)
  double y6a_factor = 0;  // lambda^(-1/4) T^(1/2)
};

inline ChosenParameters choose_parameters(double T, double eps, double s,
                                          double theta, double c = 1.0) {
  if (!(s < 1.0) || s <= 5.0 / 6.0 + 2.0 * theta / 3.0)
    throw RegularityOutOfRange(
        "choose_parameters: needs 5/6 + 2 theta/3 < s < 1");
  if (!(T > 0) || !(eps > 0) || !(theta > 0))
    throw ConfigError("choose_parameters: T, eps, theta must be positive");
  ChosenParameters out;
  out.lambda_exponent = (2.0 - 2.0 * s + 2.0 * theta) / (2.0 * s - 1.0);
  out.horizon_exponent = (6.0 * s - 5.0 - 4.0 * theta) / (2.0 * s - 1.0);
  const double n_min = std::pow(T / (c * eps), 1.0 / out.horizon_exponent);
  double N = 2.0;
  while (N < n_min) N *= 2.0;
  out.N = N;
  out.lambda_raw = std::pow(N, out.lambda_exponent);
  out.lambda = std::exp2(std::max(0.0, std::round(std::log2(out.lambda_raw))));
  out.y1_factor = std::pow(N, 2.0 - 2.0 * s) * std::pow(out.lambda, 1.0 - 2.0 * s);
  out.y6_factor = std::pow(N, 1.0 - s) * std::pow(out.lambda, 0.5 - s) * std::sqrt(T);
  out.y6a_factor = std::pow(out.lambda, -0.25) * std::sqrt(T);
  return out;
}

/// Derived configuration for the scaled run: scaled initial data, scaled
/// forcing, horizon lambda^2 T, and a fresh noise seed (the scaled noise is
/// a new white noise, not a path transform).
inline SimConfig scaled_run_setup(const SimConfig& base,
                                  const ScalingPlan& plan) {
  if (base.grid != plan.source) throw GridMismatch("scaled_run_setup");
  SimConfig out = base;
  out.grid = plan.target;
  out.lambda = plan.lambda;
  out.t_end = base.t_end * plan.lambda * plan.lambda;
  out.N = plan.N;
  out.s = plan.s;
  out.seed = splitmix64(base.seed ^ 0x5ca1ab1eULL);

  Field u0 = build_initial_data(base);
  auto scaled = std::make_shared<Field>(scale_field(u0, plan));
  out.data = InitialDataSpec{};
  out.data.kind = InitialDataSpec::Kind::explicit_field;
  out.data.explicit_field = scaled;

  if (base.noise.kind != NoiseSpec::Kind::off) {
    const std::optional<HSOperator> op = build_noise_operator(base);
    auto scaled_op = std::make_shared<HSOperator>(
        scale_operator(*op, plan.lambda));
    out.noise = NoiseSpec{};
    out.noise.kind = NoiseSpec::Kind::explicit_op;
    out.noise.explicit_op = scaled_op;
  }
  return out;
}

}  // namespace snls
