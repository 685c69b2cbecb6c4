#pragma once

#include <cmath>
#include <functional>

#include "snls/field.hpp"

namespace snls {

/// Fourier multiplier given as an evaluation rule on the wavevector.
/// Radial specs must depend on the wavevector only through |xi|.
struct MultiplierSpec {
  std::function<cplx(double xi0, double xi1, double xi2)> eval;
  bool radial = false;

  static MultiplierSpec radial_of(std::function<cplx(double)> f) {
    MultiplierSpec s;
    s.eval = [f = std::move(f)](double a, double b, double c) {
      return f(std::sqrt(a * a + b * b + c * c));
    };
    s.radial = true;
    return s;
  }
};

/// Symbol of the free group S(t) = exp(it Laplacian): exp(-i t |xi|^2).
/// The phase is computed componentwise so that repeated application is
/// bit-identical to the integrator's cached linear phase table.
inline MultiplierSpec free_propagator(double t) {
  MultiplierSpec s;
  s.eval = [t](double a, double b, double c) {
    const double ph = -(a * a + b * b + c * c) * t;
    return cplx{std::cos(ph), std::sin(ph)};
  };
  s.radial = true;
  return s;
}

inline MultiplierSpec gradient_component(int axis) {
  MultiplierSpec s;
  s.eval = [axis](double a, double b, double c) {
    const double xi = axis == 0 ? a : (axis == 1 ? b : c);
    return cplx{0.0, xi};
  };
  return s;
}

/// Applies the multiplier in Fourier space; the result is spectral.
inline Field apply_multiplier(const Field& f, const MultiplierSpec& spec) {
  require_finite(f, "apply_multiplier");
  Field out = f;
  convert(out, Rep::spectral);
  bool bad = false;
  for_each_mode(out.grid, [&](std::size_t lin, double a, double b, double c) {
    const cplx m = spec.eval(a, b, c);
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag())) bad = true;
    out.v[lin] *= m;
  });
  if (bad) throw InvalidMultiplier("multiplier non-finite at a retained mode");
  return out;
}

/// Two-thirds rule: zero every mode with any axis index |k_a| > n_a/3.
inline bool dealias_keeps(const Grid& g, std::size_t lin) {
  const ModeIndex m = decompose(g, lin);
  const int k0 = g.k_index(0, m.i0);
  const int k1 = g.k_index(1, m.i1);
  const int k2 = g.k_index(2, m.i2);
  return 3 * std::abs(k0) <= g.n[0] && 3 * std::abs(k1) <= g.n[1] &&
         3 * std::abs(k2) <= g.n[2];
}

inline void dealias_inplace_spectral(Field& f) {
  for (std::size_t lin = 0; lin < f.v.size(); ++lin)
    if (!dealias_keeps(f.grid, lin)) f.v[lin] = cplx{0.0, 0.0};
}

/// Representation-preserving dealias projection.
inline Field dealias(const Field& f) {
  Field out = transform(f, Rep::spectral);
  dealias_inplace_spectral(out);
  if (f.rep == Rep::physical) convert(out, Rep::physical);
  return out;
}

// C1 cutoff: 1 for r <= 1, 0 for r >= 2, smoothstep blend between.
inline double lp_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double t = r - 1.0;
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

/// Smooth dyadic annulus projector. M = 1 captures |xi| <~ 1 including the
/// zero mode; for dyadic M >= 2 the symbol is supported on M/2 < |xi| < 2M.
/// Summing over M in {1, 2, ..., 2^J} telescopes to the cutoff at 2^J, hence
/// reconstructs any field with |xi| <= 2^J exactly.
inline Field littlewood_paley(const Field& f, double M) {
  if (M < 1.0 || std::exp2(std::round(std::log2(M))) != M)
    throw InvalidMultiplier("littlewood_paley: M must be a dyadic >= 1");
  MultiplierSpec spec = MultiplierSpec::radial_of([M](double r) {
    const double s = M == 1.0 ? lp_cutoff(r)
                              : lp_cutoff(r / M) - lp_cutoff(2.0 * r / M);
    return cplx{s, 0.0};
  });
  Field out = apply_multiplier(f, spec);
  if (f.rep == Rep::physical) convert(out, Rep::physical);
  return out;
}

/// Dyadic blocks needed to reconstruct every mode of the grid.
inline std::vector<double> littlewood_paley_blocks(const Grid& g) {
  double ximax = 0.0;
  for_each_mode(g, [&](std::size_t, double a, double b, double c) {
    ximax = std::max(ximax, std::sqrt(a * a + b * b + c * c));
  });
  std::vector<double> blocks{1.0};
  for (double M = 2.0; M / 2.0 < ximax; M *= 2.0) blocks.push_back(M);
  return blocks;
}

}  // namespace snls
