#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace snls {

/// Pairwise (cascade) summation; the reduction tree depends only on the
/// element order, so ensemble statistics do not depend on how work was
/// split across threads.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 32) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.subspan(0, half)) + pairwise_sum(x.subspan(half));
}

struct MeanCi {
  double mean = 0.0;
  double stddev = 0.0;
  double half_width95 = 0.0;  // 1.96 * stddev / sqrt(n)
  std::size_t n = 0;

  bool contains(double value) const {
    return std::abs(value - mean) <= half_width95;
  }
  bool within_sigmas(double value, double k) const {
    if (n < 2) return value == mean;
    return std::abs(value - mean) <= k * stddev / std::sqrt(double(n));
  }
};

inline MeanCi mean_ci(std::span<const double> x) {
  MeanCi r;
  r.n = x.size();
  if (r.n == 0) return r;
  r.mean = pairwise_sum(x) / double(r.n);
  if (r.n >= 2) {
    std::vector<double> dev2(r.n);
    for (std::size_t i = 0; i < r.n; ++i) {
      const double d = x[i] - r.mean;
      dev2[i] = d * d;
    }
    r.stddev = std::sqrt(pairwise_sum(dev2) / double(r.n - 1));
    r.half_width95 = 1.959963984540054 * r.stddev / std::sqrt(double(r.n));
  }
  return r;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  double slope_stderr = 0.0;
};

inline LineFit linear_fit(std::span<const double> x, std::span<const double> y) {
  LineFit f;
  const std::size_t n = x.size();
  if (n < 2) return f;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  if (n > 2) f.slope_stderr = std::sqrt(ss_res / double(n - 2) / sxx);
  return f;
}

/// Fit y ~ C * x^p on positive data; returns the exponent fit in log-log.
inline LineFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return linear_fit(lx, ly);
}

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic Gaussian stream. Box-Muller is spelled out (rather than
/// std::normal_distribution) so the draw sequence is pinned by this code
/// alone; reproducibility of a seeded run depends on it.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Complex increment with independent N(0, dt) real and imaginary parts,
  /// so E|dbeta|^2 = 2 dt.
  std::complex<double> complex_increment(double sqrt_dt) {
    const double re = normal() * sqrt_dt;
    const double im = normal() * sqrt_dt;
    return {re, im};
  }

  double uniform01() {
    return double(engine_() >> 11) * 0x1.0p-53;  // [0, 1)
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace snls
