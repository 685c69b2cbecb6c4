#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "snls/fft.hpp"
#include "snls/grid.hpp"

namespace snls {

using cplx = std::complex<double>;

enum class Rep { physical, spectral };

/// Complex-valued grid function, stored either as point values or as
/// unitary-DFT coefficients. With the unitary convention the L2 norm is
/// sqrt(cell) * l2-norm of either representation's entries.
struct Field {
  Grid grid;
  Rep rep = Rep::physical;
  std::vector<cplx> v;

  static Field zeros(const Grid& g, Rep r = Rep::physical) {
    Field f;
    f.grid = g;
    f.rep = r;
    f.v.assign(g.points(), cplx{0.0, 0.0});
    return f;
  }

  bool finite() const {
    for (const cplx& z : v)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }
};

inline void require_finite(const Field& f, const char* what) {
  if (f.v.size() != f.grid.points())
    throw InvalidField(std::string(what) + ": value count does not match grid");
  if (!f.finite())
    throw InvalidField(std::string(what) + ": non-finite entries");
}

/// In-place change of representation via the unitary DFT.
inline void convert(Field& f, Rep target) {
  if (f.rep == target) return;
  if (target == Rep::spectral)
    fft::forward(f.grid, f.v.data(), f.v.data());
  else
    fft::backward(f.grid, f.v.data(), f.v.data());
  f.rep = target;
}

/// Copying change of representation; validates the input.
inline Field transform(const Field& f, Rep target) {
  require_finite(f, "transform");
  Field out = f;
  convert(out, target);
  return out;
}

inline Field operator+(const Field& a, const Field& b) {
  if (a.grid != b.grid || a.rep != b.rep) throw GridMismatch("field add");
  Field out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}

inline Field operator-(const Field& a, const Field& b) {
  if (a.grid != b.grid || a.rep != b.rep) throw GridMismatch("field sub");
  Field out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}

inline Field operator*(cplx c, const Field& a) {
  Field out = a;
  for (auto& z : out.v) z *= c;
  return out;
}

/// Spatial translation u(x) -> u(x - shift), exact on the mode lattice.
inline Field translate(const Field& f, const std::array<double, 3>& shift) {
  Field out = transform(f, Rep::spectral);
  for_each_mode(out.grid, [&](std::size_t lin, double x0, double x1, double x2) {
    const double phase = -(x0 * shift[0] + x1 * shift[1] + x2 * shift[2]);
    out.v[lin] *= cplx{std::cos(phase), std::sin(phase)};
  });
  if (f.rep == Rep::physical) convert(out, Rep::physical);
  return out;
}

}  // namespace snls
