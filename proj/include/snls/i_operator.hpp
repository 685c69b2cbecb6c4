#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "snls/multiplier.hpp"
#include "snls/norms.hpp"

namespace snls {

/// C1 transition profile of the smoothing multiplier on N < |xi| < 2N.
/// Both choices match the exact endpoint laws (value and log-slope) and are
/// non-increasing; they differ only in the interior, which lets constant
/// sensitivity be measured without touching any exponent.
enum class TransitionProfile { cubic_smoothstep, quadratic_blend };

inline double transition_exponent(double x, TransitionProfile profile) {
  // returns p(x) with log2 m = -(1-s) * p(x); p(0) = 0, p(1) = 1,
  // p'(0) = 0, p'(1) = 1, p non-decreasing on [0, 1].
  switch (profile) {
    case TransitionProfile::cubic_smoothstep:
      return x * x * x * (3.0 - 2.0 * x);
    case TransitionProfile::quadratic_blend:
      return x * x * (2.0 - x);
  }
  return x;
}

/// Smoothing multiplier value: 1 on |xi| <= N, (N/|xi|)^(1-s) on |xi| >= 2N,
/// C1 non-increasing blend in between.
inline double smoothing_symbol(double xi_abs, double N, double s,
                               TransitionProfile profile) {
  if (xi_abs <= N) return 1.0;
  if (xi_abs >= 2.0 * N) return std::pow(N / xi_abs, 1.0 - s);
  const double x = std::log2(xi_abs / N);
  return std::exp2(-(1.0 - s) * transition_exponent(x, profile));
}

/// Smoothing operator I_N as a cached radial Fourier multiplier.
/// Immutable after construction; safe to share across workers.
struct IMultiplier {
  double N = 1.0;
  double s = 1.0;
  TransitionProfile profile = TransitionProfile::cubic_smoothstep;
  Grid grid;
  std::vector<double> values;  // per mode, in grid storage order

  double at(std::size_t lin) const { return values[lin]; }
};

inline IMultiplier build_multiplier(
    double N, double s, const Grid& grid,
    TransitionProfile profile = TransitionProfile::cubic_smoothstep) {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidRegularity("smoothing multiplier needs 0 < s < 1");
  if (!(N >= 1.0)) throw InvalidRegularity("smoothing multiplier needs N >= 1");
  IMultiplier m;
  m.N = N;
  m.s = s;
  m.profile = profile;
  m.grid = grid;
  m.values.resize(grid.points());
  for_each_mode(grid, [&](std::size_t lin, double a, double b, double c) {
    m.values[lin] =
        smoothing_symbol(std::sqrt(a * a + b * b + c * c), N, s, profile);
  });
  return m;
}

inline Field apply_i(const Field& f, const IMultiplier& m) {
  if (f.grid != m.grid) throw GridMismatch("apply_i");
  Field out = transform(f, Rep::spectral);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= m.values[i];
  if (f.rep == Rep::physical) convert(out, Rep::physical);
  return out;
}

inline double mass(const Field& f) {
  const double l2 = l2_norm(f);
  return l2 * l2;
}

/// Defocusing cubic energy: (1/2)|grad u|_L2^2 + (1/4)|u|_L4^4.
inline double energy(const Field& f) {
  require_finite(f, "energy");
  Field g = transform(f, Rep::spectral);
  double grad2 = 0.0;
  for_each_mode(g.grid, [&](std::size_t lin, double a, double b, double c) {
    grad2 += (a * a + b * b + c * c) * std::norm(g.v[lin]);
  });
  grad2 *= g.grid.cell();
  convert(g, Rep::physical);
  double l4 = 0.0;
  for (const cplx& z : g.v) {
    const double m2 = std::norm(z);
    l4 += m2 * m2;
  }
  l4 *= g.grid.cell();
  return 0.5 * grad2 + 0.25 * l4;
}

inline double modified_energy(const Field& f, const IMultiplier& m) {
  return energy(apply_i(f, m));
}

/// Dealiased cubic nonlinearity |u|^2 u. The input is assumed band-limited
/// to the two-thirds region; the pointwise product is formed in physical
/// space and the result projected back onto that region.
inline Field cubic_nonlinearity(const Field& f) {
  Field g = transform(f, Rep::physical);
  for (cplx& z : g.v) z *= std::norm(z);
  convert(g, Rep::spectral);
  dealias_inplace_spectral(g);
  if (f.rep == Rep::physical) convert(g, Rep::physical);
  return g;
}

/// Commutator of the smoothing operator with the cubic nonlinearity:
/// I_N(|u|^2 u) - |I_N u|^2 I_N u, with both products dealiased.
/// Vanishes identically when u is band-limited to |xi| <= N/3.
inline Field commutator(const Field& f, const IMultiplier& m) {
  Field lhs = apply_i(cubic_nonlinearity(f), m);
  Field rhs = cubic_nonlinearity(apply_i(f, m));
  convert(lhs, Rep::spectral);
  convert(rhs, Rep::spectral);
  Field out = lhs - rhs;
  if (f.rep == Rep::physical) convert(out, Rep::physical);
  return out;
}

}  // namespace snls
