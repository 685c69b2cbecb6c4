#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "snls/field.hpp"
#include "snls/stats.hpp"

namespace snls {

/// Streaming generator of cylindrical Wiener increments: one independent
/// complex Brownian coordinate per grid mode, E|dbeta|^2 = 2 dt. The draw
/// order (step-major, then mode, real part before imaginary) is part of the
/// reproducibility contract.
class WienerStream {
 public:
  WienerStream(std::uint64_t seed, double dt, std::size_t modes)
      : rng_(seed), sqrt_dt_(std::sqrt(dt)), modes_(modes) {}

  void next_step(std::span<cplx> out) {
    for (std::size_t m = 0; m < modes_; ++m)
      out[m] = rng_.complex_increment(sqrt_dt_);
  }

  std::size_t modes() const { return modes_; }

 private:
  GaussianRng rng_;
  double sqrt_dt_;
  std::size_t modes_;
};

/// Materialized record of increments, [steps x modes] row-major.
struct WienerPath {
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t modes = 0;
  std::vector<cplx> increments;

  std::span<const cplx> step(std::size_t j) const {
    return {increments.data() + j * modes, modes};
  }
  std::span<cplx> step(std::size_t j) {
    return {increments.data() + j * modes, modes};
  }
};

inline WienerPath sample_wiener(std::uint64_t seed, double dt,
                                std::size_t steps, const Grid& grid) {
  if (!(dt > 0.0)) throw ConfigError("sample_wiener: dt must be positive");
  WienerPath p;
  p.seed = seed;
  p.dt = dt;
  p.steps = steps;
  p.modes = grid.points();
  p.increments.resize(steps * p.modes);
  WienerStream stream(seed, dt, p.modes);
  for (std::size_t j = 0; j < steps; ++j) stream.next_step(p.step(j));
  return p;
}

/// Sums consecutive fine increments into a coarser path over the same
/// Brownian motion; exact telescoping, used by dt-refinement ladders.
inline WienerPath coarsen(const WienerPath& fine, std::size_t factor) {
  if (factor == 0 || fine.steps % factor != 0)
    throw ConfigError("coarsen: factor must divide the step count");
  WienerPath c;
  c.seed = fine.seed;
  c.dt = fine.dt * double(factor);
  c.steps = fine.steps / factor;
  c.modes = fine.modes;
  c.increments.assign(c.steps * c.modes, cplx{0, 0});
  for (std::size_t j = 0; j < fine.steps; ++j) {
    auto dst = c.step(j / factor);
    auto src = fine.step(j);
    for (std::size_t m = 0; m < c.modes; ++m) dst[m] += src[m];
  }
  return c;
}

/// Statistics of the white-noise scaling check: the rescaled, block-
/// aggregated noise should have the same per-cell covariance as a fresh
/// white noise, and a fixed path keeps its quadratic variation.
struct WhiteNoiseScalingStats {
  double variance_ratio = 1.0;       // scaled per-cell variance / 2 dt h
  double variance_ratio_sigma = 0;   // MC standard error of the ratio
  double quadratic_variation_ratio = 1.0;
  std::size_t cells = 0;

  bool within_sigmas(double k) const {
    return std::abs(variance_ratio - 1.0) <= k * variance_ratio_sigma;
  }
};

/// Discrete check of the scaling family
///   xi^lambda(t, x) = lambda^{-(a1 + d a2)/2} xi(t / lambda^{a1}, x / lambda^{a2})
/// on a 1d space-time lattice: aggregate lambda^{a1} x lambda^{a2} blocks of
/// fine white-noise cell increments and apply the prefactor; per-cell second
/// moments must match the unscaled convention E|zeta|^2 = 2 dt h.
inline WhiteNoiseScalingStats scaled_white_noise_check(
    int lambda, int a1, int a2, std::uint64_t seed = 7,
    std::size_t coarse_time_cells = 4096, std::size_t coarse_space_cells = 16,
    double dt = 0.01, double h = 0.1) {
  const int d = 1;
  const std::size_t bt = static_cast<std::size_t>(std::pow(lambda, a1));
  const std::size_t bx = static_cast<std::size_t>(std::pow(lambda, a2));
  const double prefactor = std::pow(double(lambda), -0.5 * (a1 + d * a2));
  // fine lattice resolves one coarse cell into bt x bx fine cells of the
  // same physical size (the scaling dilates the argument, so the fine field
  // is sampled on cells dt, h and aggregated over the dilated block)
  GaussianRng rng(seed);
  const double cell_sd = std::sqrt(dt * h);
  std::vector<double> sq;
  sq.reserve(coarse_time_cells * coarse_space_cells);
  double qv_fine = 0.0;
  for (std::size_t ct = 0; ct < coarse_time_cells; ++ct) {
    for (std::size_t cx = 0; cx < coarse_space_cells; ++cx) {
      cplx block{0, 0};
      for (std::size_t jt = 0; jt < bt; ++jt)
        for (std::size_t jx = 0; jx < bx; ++jx) {
          const cplx z = rng.complex_increment(cell_sd);
          block += z;
          qv_fine += std::norm(z);
        }
      const cplx scaled = prefactor * block;
      sq.push_back(std::norm(scaled));
    }
  }
  WhiteNoiseScalingStats out;
  out.cells = sq.size();
  const MeanCi m = mean_ci(sq);
  const double expected = 2.0 * dt * h * double(bt * bx) * prefactor * prefactor;
  out.variance_ratio = m.mean / expected;
  out.variance_ratio_sigma = m.stddev / std::sqrt(double(m.n)) / expected;
  // deterministic rescaling of the same path: the scaled quadratic
  // variation over the covered span against the fine one
  double qv_scaled = 0.0;
  for (double v : sq) qv_scaled += v;
  out.quadratic_variation_ratio =
      qv_scaled / (prefactor * prefactor) / qv_fine;
  return out;
}

}  // namespace snls
