#pragma once

#include <cmath>

#include "snls/field.hpp"

namespace snls {

/// Squared Sobolev weight: |xi|^(2s) (homogeneous, zero mode dropped) or
/// (1 + |xi|^2)^s.
inline double sobolev_weight_sq(double xi_sq, double s, bool homogeneous) {
  if (homogeneous) {
    if (xi_sq == 0.0) return s == 0.0 ? 1.0 : 0.0;
    return std::pow(xi_sq, s);
  }
  return std::pow(1.0 + xi_sq, s);
}

/// Sobolev norm via the mode sum, Plancherel-consistent with the grid
/// quadrature: sobolev_norm(f, 0, false) equals the L2 norm.
inline double sobolev_norm(const Field& f, double s, bool homogeneous) {
  require_finite(f, "sobolev_norm");
  Field g = transform(f, Rep::spectral);
  double sum = 0.0;
  for_each_mode(g.grid, [&](std::size_t lin, double a, double b, double c) {
    const double w = sobolev_weight_sq(a * a + b * b + c * c, s, homogeneous);
    sum += w * std::norm(g.v[lin]);
  });
  return std::sqrt(g.grid.cell() * sum);
}

inline double l2_norm(const Field& f) { return sobolev_norm(f, 0.0, false); }

/// Grid quadrature of the L^p norm with uniform weights (L/n)^d.
inline double lebesgue_norm(const Field& f, double p) {
  require_finite(f, "lebesgue_norm");
  if (p < 1.0) throw InvalidField("lebesgue_norm: p must be >= 1");
  Field g = transform(f, Rep::physical);
  double sum = 0.0;
  for (const cplx& z : g.v) sum += std::pow(std::abs(z), p);
  return std::pow(g.grid.cell() * sum, 1.0 / p);
}

inline double sup_norm(const Field& f) {
  Field g = transform(f, Rep::physical);
  double m = 0.0;
  for (const cplx& z : g.v) m = std::max(m, std::abs(z));
  return m;
}

/// L2 inner product <a, b> = integral of conj(a) b; same value in either
/// representation by unitarity, evaluated without changing representation
/// when both sides already agree.
inline cplx inner_product(const Field& a, const Field& b) {
  if (a.grid != b.grid) throw GridMismatch("inner_product");
  const Field* pa = &a;
  const Field* pb = &b;
  Field ca, cb;
  if (a.rep != b.rep) {
    ca = transform(a, Rep::spectral);
    cb = transform(b, Rep::spectral);
    pa = &ca;
    pb = &cb;
  }
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < pa->v.size(); ++i)
    sum += std::conj(pa->v[i]) * pb->v[i];
  return a.grid.cell() * sum;
}

}  // namespace snls
