#pragma once

#include <optional>
#include <vector>

#include "snls/hs_operator.hpp"
#include "snls/wiener.hpp"

namespace snls {

/// Trajectory of the stochastic convolution Psi(t), the Duhamel integral of
/// the forcing against the free group, with Psi(0) = 0.
struct StochasticConvolution {
  std::vector<double> times;
  std::vector<Field> psi;
};

/// Spectral noise-injection amplitudes: the unitary-DFT coefficient kick of
/// mode m per unit Brownian increment is -i * g[m]. For a Fourier-diagonal
/// phi, g = symbol * sqrt(P / V) (the L2-normalized basis vector carries
/// 1/sqrt(V), the unitary DFT carries sqrt(P)).
inline std::vector<cplx> injection_amplitudes(const FourierDiagonal& op) {
  const double scale =
      std::sqrt(double(op.grid.points()) / op.grid.volume());
  std::vector<cplx> g(op.symbol.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = scale * op.symbol[i];
  return g;
}

/// Exact per-mode recursion for the stochastic convolution:
///   psi(t + dt) = exp(-i |xi|^2 dt) (psi(t) - i g dbeta).
/// The linear stochastic part carries no time-discretization error beyond
/// the increment resolution itself.
inline StochasticConvolution stochastic_convolution(
    const HSOperator& op, const WienerPath& path,
    const std::vector<std::size_t>& save_steps) {
  const auto* diag = std::get_if<FourierDiagonal>(&op);
  if (!diag)
    throw ConfigError(
        "stochastic_convolution: operator must be Fourier-diagonal "
        "(materialize kernels on small grids first)");
  const Grid& grid = diag->grid;
  if (path.modes != grid.points())
    throw GridMismatch("stochastic_convolution: path/grid mode count");

  const std::vector<cplx> g = injection_amplitudes(*diag);
  std::vector<cplx> phase(grid.points());
  for_each_mode(grid, [&](std::size_t lin, double a, double b, double c) {
    const double ph = -(a * a + b * b + c * c) * path.dt;
    phase[lin] = cplx{std::cos(ph), std::sin(ph)};
  });

  StochasticConvolution out;
  Field psi = Field::zeros(grid, Rep::spectral);
  std::size_t next_save = 0;
  auto maybe_save = [&](std::size_t step) {
    while (next_save < save_steps.size() && save_steps[next_save] == step) {
      out.times.push_back(double(step) * path.dt);
      out.psi.push_back(psi);
      ++next_save;
    }
  };
  maybe_save(0);
  const cplx minus_i{0.0, -1.0};
  for (std::size_t j = 0; j < path.steps; ++j) {
    auto inc = path.step(j);
    for (std::size_t m = 0; m < path.modes; ++m)
      psi.v[m] = phase[m] * (psi.v[m] + minus_i * g[m] * inc[m]);
    maybe_save(j + 1);
  }
  return out;
}

inline std::vector<std::size_t> every_step(std::size_t steps) {
  std::vector<std::size_t> v(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) v[i] = i;
  return v;
}

}  // namespace snls
