#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

#include "snls/errors.hpp"

namespace snls {

/// Uniform periodic grid in 1, 2 or 3 dimensions.
///
/// Wavenumbers along axis a are xi = 2*pi*k / box[a] with the integer index
/// k running over {-n/2, ..., n/2 - 1} in standard FFT storage order
/// (k = i for i < n/2, k = i - n otherwise).
struct Grid {
  int dim = 0;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> box{1.0, 1.0, 1.0};

  static Grid make(int dim, std::array<int, 3> n, std::array<double, 3> box) {
    if (dim < 1 || dim > 3) throw ConfigError("grid dim must be 1, 2 or 3");
    Grid g;
    g.dim = dim;
    for (int a = 0; a < 3; ++a) {
      if (a < dim) {
        if (n[a] < 8 || n[a] % 2 != 0)
          throw ConfigError("grid points per axis must be even and >= 8");
        if (!(box[a] > 0.0)) throw ConfigError("box length must be positive");
        g.n[a] = n[a];
        g.box[a] = box[a];
      } else {
        g.n[a] = 1;
        g.box[a] = 1.0;
      }
    }
    return g;
  }

  /// Cube with n points per axis and side length L.
  static Grid cubic(int dim, int n_per_axis, double length) {
    return make(dim, {n_per_axis, n_per_axis, n_per_axis},
                {length, length, length});
  }

  std::size_t points() const {
    return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) *
           static_cast<std::size_t>(n[2]);
  }

  double volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= box[a];
    return v;
  }

  /// Quadrature weight of one grid cell, prod_a (L_a / n_a).
  double cell() const { return volume() / static_cast<double>(points()); }

  /// Signed integer mode index along an axis from the storage index.
  int k_index(int axis, int i) const {
    return i <= n[axis] / 2 - 1 || n[axis] == 1 ? i : i - n[axis];
  }

  double xi_axis(int axis, int i) const {
    return 2.0 * std::numbers::pi * k_index(axis, i) / box[axis];
  }

  bool operator==(const Grid& o) const {
    return dim == o.dim && n == o.n && box == o.box;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Row-major linear index decomposition, i2 fastest.
struct ModeIndex {
  int i0, i1, i2;
};

inline ModeIndex decompose(const Grid& g, std::size_t lin) {
  const int n1 = g.n[1], n2 = g.n[2];
  const int i2 = static_cast<int>(lin % n2);
  const int i1 = static_cast<int>((lin / n2) % n1);
  const int i0 = static_cast<int>(lin / (static_cast<std::size_t>(n1) * n2));
  return {i0, i1, i2};
}

inline std::size_t linear_index(const Grid& g, int i0, int i1, int i2) {
  return (static_cast<std::size_t>(i0) * g.n[1] + i1) * g.n[2] + i2;
}

/// Visits every mode with its linear index and wavevector (xi0, xi1, xi2).
template <typename F>
void for_each_mode(const Grid& g, F&& f) {
  std::size_t lin = 0;
  for (int i0 = 0; i0 < g.n[0]; ++i0) {
    const double x0 = g.xi_axis(0, i0);
    for (int i1 = 0; i1 < g.n[1]; ++i1) {
      const double x1 = g.xi_axis(1, i1);
      for (int i2 = 0; i2 < g.n[2]; ++i2, ++lin) {
        f(lin, x0, x1, g.xi_axis(2, i2));
      }
    }
  }
}

/// |xi|^2 for the mode at a linear index.
inline double xi_norm_sq(const Grid& g, std::size_t lin) {
  const ModeIndex m = decompose(g, lin);
  const double a = g.xi_axis(0, m.i0);
  const double b = g.xi_axis(1, m.i1);
  const double c = g.xi_axis(2, m.i2);
  return a * a + b * b + c * c;
}

/// Largest |xi| present on the grid after two-thirds dealiasing.
inline double dealiased_xi_max(const Grid& g) {
  double s = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const int kmax = g.n[a] / 3;
    const double xi = 2.0 * std::numbers::pi * kmax / g.box[a];
    s += xi * xi;
  }
  return std::sqrt(s);
}

}  // namespace snls
