#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "snls/grid.hpp"

namespace snls {
namespace fft {

using cplx = std::complex<double>;

// Plans are created once per grid shape and reused via the new-array execute
// interface. FFTW_UNALIGNED makes execution valid on any caller buffer;
// FFTW_ESTIMATE keeps plan selection independent of runtime timings, so
// results are reproducible run to run.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  void execute(const Grid& g, cplx* in, cplx* out, int sign) {
    const Entry& e = entry(g);
    fftw_execute_dft(sign == FFTW_FORWARD ? e.fwd : e.bwd,
                     reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
  }

 private:
  struct Entry {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
  };

  const Entry& entry(const Grid& g) {
    std::array<int, 4> key{g.dim, g.n[0], g.n[1], g.n[2]};
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = plans_.find(key);
      if (it != plans_.end()) return it->second;
      std::vector<cplx> scratch(g.points());
      auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
      std::array<int, 3> dims_arr{g.n[0], g.n[1], g.n[2]};
      Entry e;
      e.fwd = fftw_plan_dft(g.dim, dims_arr.data(), buf, buf, FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
      e.bwd = fftw_plan_dft(g.dim, dims_arr.data(), buf, buf, FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
      return plans_.emplace(key, e).first->second;
    }
  }

  std::mutex mutex_;
  std::map<std::array<int, 4>, Entry> plans_;
};

/// Unitary forward transform (physical -> spectral), in place allowed.
inline void forward(const Grid& g, cplx* in, cplx* out) {
  PlanCache::instance().execute(g, in, out, FFTW_FORWARD);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.points()));
  for (std::size_t i = 0; i < g.points(); ++i) out[i] *= scale;
}

/// Unitary backward transform (spectral -> physical), in place allowed.
inline void backward(const Grid& g, cplx* in, cplx* out) {
  PlanCache::instance().execute(g, in, out, FFTW_BACKWARD);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.points()));
  for (std::size_t i = 0; i < g.points(); ++i) out[i] *= scale;
}

namespace detail {
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Reusable unitary 1d transform of arbitrary length (time axis of
/// space-time data).
class Plan1d {
 public:
  explicit Plan1d(std::size_t n) : n_(n) {
    std::vector<cplx> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(detail::planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~Plan1d() {
    std::lock_guard<std::mutex> lock(detail::planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan1d(const Plan1d&) = delete;
  Plan1d& operator=(const Plan1d&) = delete;

  void forward(cplx* data) const {
    fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (std::size_t i = 0; i < n_; ++i) data[i] *= scale;
  }

 private:
  std::size_t n_;
  fftw_plan plan_;
};

inline void forward_1d(std::vector<cplx>& data) {
  Plan1d(data.size()).forward(data.data());
}

}  // namespace fft
}  // namespace snls
