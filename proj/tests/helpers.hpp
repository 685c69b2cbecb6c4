#pragma once

#include <snls/snls.hpp>

// Test-side oracles, kept independent of the library's transform and
// product pipeline: direct DFT sums and brute-force mode convolutions.

namespace testing_oracles {

using snls::cplx;
using snls::Field;
using snls::Grid;

/// O(P^2) direct unitary DFT, no FFT library involved.
inline Field naive_dft(const Field& physical) {
  const Grid& g = physical.grid;
  const std::size_t P = g.points();
  Field out = Field::zeros(g, snls::Rep::spectral);
  for (std::size_t k = 0; k < P; ++k) {
    const snls::ModeIndex mk = snls::decompose(g, k);
    const double xi0 = g.xi_axis(0, mk.i0);
    const double xi1 = g.xi_axis(1, mk.i1);
    const double xi2 = g.xi_axis(2, mk.i2);
    cplx acc{0, 0};
    for (std::size_t j = 0; j < P; ++j) {
      const snls::ModeIndex mj = snls::decompose(g, j);
      const double x0 = mj.i0 * g.box[0] / g.n[0];
      const double x1 = mj.i1 * g.box[1] / g.n[1];
      const double x2 = mj.i2 * g.box[2] / g.n[2];
      const double ph = -(xi0 * x0 + xi1 * x1 + xi2 * x2);
      acc += physical.v[j] * cplx{std::cos(ph), std::sin(ph)};
    }
    out.v[k] = acc / std::sqrt(double(P));
  }
  return out;
}

/// Direct mode-sum Sobolev norm from the naive DFT.
inline double naive_sobolev(const Field& f, double s, bool homogeneous) {
  Field ph = snls::transform(f, snls::Rep::physical);
  Field sp = naive_dft(ph);
  double sum = 0;
  snls::for_each_mode(f.grid, [&](std::size_t lin, double a, double b, double c) {
    const double xi2 = a * a + b * b + c * c;
    double w;
    if (homogeneous)
      w = xi2 == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(xi2, s);
    else
      w = std::pow(1.0 + xi2, s);
    sum += w * std::norm(sp.v[lin]);
  });
  return std::sqrt(f.grid.cell() * sum);
}

struct SparseMode {
  int k[3];
  cplx value;  // unitary-DFT coefficient
};

inline std::vector<SparseMode> nonzero_modes(const Field& spectral,
                                             double tol = 0.0) {
  std::vector<SparseMode> out;
  const Grid& g = spectral.grid;
  for (std::size_t lin = 0; lin < spectral.v.size(); ++lin) {
    if (std::abs(spectral.v[lin]) > tol) {
      const snls::ModeIndex m = snls::decompose(g, lin);
      out.push_back(SparseMode{{g.k_index(0, m.i0), g.k_index(1, m.i1),
                                g.k_index(2, m.i2)},
                               spectral.v[lin]});
    }
  }
  return out;
}

inline std::size_t wrap_index(const Grid& g, int k0, int k1, int k2) {
  int idx[3];
  const int ks[3] = {k0, k1, k2};
  for (int a = 0; a < 3; ++a) {
    int k = ((ks[a] % g.n[a]) + g.n[a]) % g.n[a];  // cyclic fold
    idx[a] = k;
  }
  return snls::linear_index(g, idx[0], idx[1], idx[2]);
}

/// Brute-force cyclic convolution of |u|^2 u in mode space with the
/// two-thirds projection of the result: the exact mathematical counterpart
/// of the pointwise-product pipeline, computed by direct triple summation.
inline Field convolution_cubic(const Field& u) {
  const Grid& g = u.grid;
  Field sp = snls::transform(u, snls::Rep::spectral);
  const auto modes = nonzero_modes(sp, 1e-300);
  Field out = snls::Field::zeros(g, snls::Rep::spectral);
  const double inv_p = 1.0 / double(g.points());
  for (const auto& a : modes)
    for (const auto& b : modes)
      for (const auto& c : modes) {
        // u * conj(u) * u: the conjugate factor enters as conj(u^(q)) at -q
        const int k0 = a.k[0] - b.k[0] + c.k[0];
        const int k1 = a.k[1] - b.k[1] + c.k[1];
        const int k2 = a.k[2] - b.k[2] + c.k[2];
        out.v[wrap_index(g, k0, k1, k2)] +=
            inv_p * a.value * std::conj(b.value) * c.value;
      }
  snls::dealias_inplace_spectral(out);
  return out;
}

/// Brute-force commutator with the multiplier weights m(k_out) - m(p) m(q) m(r).
inline Field convolution_commutator(const Field& u, const snls::IMultiplier& im) {
  const Grid& g = u.grid;
  Field sp = snls::transform(u, snls::Rep::spectral);
  const auto modes = nonzero_modes(sp, 1e-300);
  Field out = snls::Field::zeros(g, snls::Rep::spectral);
  const double inv_p = 1.0 / double(g.points());
  auto m_of = [&](int k0, int k1, int k2) {
    const double xi0 = 2 * std::numbers::pi * k0 / g.box[0];
    const double xi1 = 2 * std::numbers::pi * k1 / g.box[1];
    const double xi2 = 2 * std::numbers::pi * k2 / g.box[2];
    return snls::smoothing_symbol(
        std::sqrt(xi0 * xi0 + xi1 * xi1 + xi2 * xi2), im.N, im.s, im.profile);
  };
  for (const auto& a : modes)
    for (const auto& b : modes)
      for (const auto& c : modes) {
        const int k0 = a.k[0] - b.k[0] + c.k[0];
        const int k1 = a.k[1] - b.k[1] + c.k[1];
        const int k2 = a.k[2] - b.k[2] + c.k[2];
        const std::size_t lin = wrap_index(g, k0, k1, k2);
        if (!snls::dealias_keeps(g, lin)) continue;
        const snls::ModeIndex mi = snls::decompose(g, lin);
        const double m_out = m_of(g.k_index(0, mi.i0), g.k_index(1, mi.i1),
                                  g.k_index(2, mi.i2));
        const double weight =
            m_out - m_of(a.k[0], a.k[1], a.k[2]) * m_of(b.k[0], b.k[1], b.k[2]) *
                        m_of(c.k[0], c.k[1], c.k[2]);
        out.v[lin] += inv_p * weight * a.value * std::conj(b.value) * c.value;
      }
  return out;
}

/// Deterministic dense random field (all modes populated).
inline Field random_field(const Grid& g, std::uint64_t seed,
                          double amplitude = 1.0, int band = -1) {
  snls::GaussianRng rng(seed);
  Field f = snls::Field::zeros(g, snls::Rep::spectral);
  snls::for_each_mode(g, [&](std::size_t lin, double, double, double) {
    const snls::ModeIndex m = snls::decompose(g, lin);
    const int k0 = g.k_index(0, m.i0), k1 = g.k_index(1, m.i1),
              k2 = g.k_index(2, m.i2);
    const cplx z{rng.normal(), rng.normal()};
    if (band < 0 || (std::abs(k0) <= band && std::abs(k1) <= band &&
                     std::abs(k2) <= band))
      f.v[lin] = amplitude * z;
  });
  return f;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i)
    m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

}  // namespace testing_oracles
