#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace snls;
using namespace testing_oracles;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("transform: constant field populates only the zero mode") {
  Grid g = Grid::cubic(2, 16, 2 * kPi);
  Field f = Field::zeros(g, Rep::physical);
  for (auto& z : f.v) z = cplx{2.5, -1.0};
  Field sp = transform(f, Rep::spectral);
  CHECK(std::abs(sp.v[0] - cplx{2.5, -1.0} * std::sqrt(double(g.points()))) <
        1e-12 * std::sqrt(double(g.points())));
  for (std::size_t i = 1; i < sp.v.size(); ++i)
    CHECK(std::abs(sp.v[i]) < 1e-12);
}

TEST_CASE("transform: on-grid plane wave is a single mode") {
  Grid g = Grid::cubic(3, 8, 2 * kPi);
  Field f = Field::zeros(g, Rep::physical);
  for_each_mode(g, [&](std::size_t lin, double, double, double) {
    const ModeIndex m = decompose(g, lin);
    const double x = m.i0 * g.box[0] / g.n[0];
    const double y = m.i1 * g.box[1] / g.n[1];
    f.v[lin] = std::polar(1.0, 2.0 * x - 1.0 * y);  // xi = (2, -1, 0)
  });
  Field sp = transform(f, Rep::spectral);
  const std::size_t hit = linear_index(g, 2, g.n[1] - 1, 0);
  for (std::size_t i = 0; i < sp.v.size(); ++i) {
    if (i == hit)
      CHECK(std::abs(sp.v[i] - std::sqrt(double(g.points()))) < 1e-10);
    else
      CHECK(std::abs(sp.v[i]) < 1e-10);
  }
}

TEST_CASE("transform: roundtrip is the identity to 1e-12 relative") {
  for (int dim : {1, 2, 3}) {
    Grid g = Grid::cubic(dim, dim == 3 ? 16 : 32, 5.0);
    Field f = random_field(g, 17 + dim);
    convert(f, Rep::physical);
    Field round = transform(transform(f, Rep::spectral), Rep::physical);
    double scale = 0;
    for (const auto& z : f.v) scale = std::max(scale, std::abs(z));
    CHECK(max_abs_diff(f, round) < 1e-12 * scale);
  }
}

TEST_CASE("transform: matches the direct DFT oracle") {
  Grid g = Grid::cubic(2, 12, 3.0);  // also exercises a non power of two
  Field f = random_field(g, 5);
  convert(f, Rep::physical);
  Field via_fft = transform(f, Rep::spectral);
  Field via_sum = naive_dft(f);
  CHECK(max_abs_diff(via_fft, via_sum) < 1e-11);
}

TEST_CASE("transform rejects non-finite input") {
  Grid g = Grid::cubic(1, 8, 1.0);
  Field f = Field::zeros(g, Rep::physical);
  f.v[2] = cplx{std::numeric_limits<double>::quiet_NaN(), 0};
  CHECK_THROWS_AS(transform(f, Rep::spectral), InvalidField);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid::cubic(3, 7, 1.0), ConfigError);
  CHECK_THROWS_AS(Grid::cubic(3, 6, 1.0), ConfigError);
  CHECK_THROWS_AS(Grid::cubic(0, 8, 1.0), ConfigError);
  CHECK_THROWS_AS(Grid::cubic(2, 8, -1.0), ConfigError);
}

TEST_CASE("apply_multiplier: identity, unimodular, composition") {
  Grid g = Grid::cubic(2, 16, 2 * kPi);
  Field f = random_field(g, 23);

  MultiplierSpec one = MultiplierSpec::radial_of([](double) { return cplx{1, 0}; });
  CHECK(max_abs_diff(apply_multiplier(f, one), f) < 1e-14);

  // free propagator preserves every modulus
  Field prop = apply_multiplier(f, free_propagator(0.37));
  for (std::size_t i = 0; i < f.v.size(); ++i)
    CHECK(std::abs(std::abs(prop.v[i]) - std::abs(f.v[i])) < 1e-12);

  // composition equals product-spec application
  MultiplierSpec a = MultiplierSpec::radial_of(
      [](double r) { return cplx{1.0 / (1.0 + r * r), 0.0}; });
  MultiplierSpec b = free_propagator(-1.2);
  Field ab = apply_multiplier(apply_multiplier(f, a), b);
  MultiplierSpec prod;
  prod.eval = [&](double x, double y, double z) {
    return a.eval(x, y, z) * b.eval(x, y, z);
  };
  CHECK(max_abs_diff(ab, apply_multiplier(f, prod)) < 1e-12);
}

TEST_CASE("apply_multiplier: linear in the field") {
  Grid g = Grid::cubic(2, 12, 4.0);
  Field f = random_field(g, 3), h = random_field(g, 4);
  MultiplierSpec spec = free_propagator(0.5);
  Field lhs = apply_multiplier(f + h, spec);
  Field rhs = apply_multiplier(f, spec) + apply_multiplier(h, spec);
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("apply_multiplier flags non-finite symbols") {
  Grid g = Grid::cubic(1, 8, 2 * kPi);
  Field f = random_field(g, 9);
  MultiplierSpec bad = MultiplierSpec::radial_of(
      [](double r) { return cplx{r == 0.0 ? 1.0 / 0.0 : 1.0, 0.0}; });
  CHECK_THROWS_AS(apply_multiplier(f, bad), InvalidMultiplier);
}

TEST_CASE("sobolev_norm: plane wave closed form and oracle agreement") {
  Grid g = Grid::cubic(3, 8, 2 * kPi);
  SECTION("zero field") {
    CHECK(sobolev_norm(Field::zeros(g), 1.0, true) == 0.0);
  }
  SECTION("plane wave") {
    // a exp(i xi0 . x): homogeneous norm |a| |xi0|^s sqrt(V)
    Field f = Field::zeros(g, Rep::spectral);
    const cplx a{0.7, -0.2};
    f.v[linear_index(g, 2, 1, 0)] = a * std::sqrt(double(g.points()));
    const double xi = std::sqrt(5.0);
    for (double s : {0.0, 0.5, 0.9, 1.0, -0.5}) {
      const double expected = std::abs(a) * std::pow(xi, s) * std::sqrt(g.volume());
      CHECK(sobolev_norm(f, s, true) == Catch::Approx(expected).epsilon(1e-12));
    }
  }
  SECTION("random field against the mode-sum oracle") {
    Field f = random_field(g, 31);
    for (double s : {0.0, 0.75, 1.0})
      for (bool hom : {true, false})
        CHECK(sobolev_norm(f, s, hom) ==
              Catch::Approx(naive_sobolev(f, s, hom)).epsilon(1e-12));
  }
  SECTION("monotone in s for fields off the unit ball") {
    Field f = Field::zeros(g, Rep::spectral);
    f.v[linear_index(g, 1, 1, 0)] = {1.0, 0.3};  // |xi| = sqrt(2) >= 1
    f.v[linear_index(g, 3, 0, 0)] = {0.2, 0.1};
    double prev = 0;
    for (double s : {0.0, 0.3, 0.6, 0.9}) {
      const double cur = sobolev_norm(f, s, true);
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("lebesgue_norm: constants, Plancherel at p = 2, plane-wave L4") {
  Grid g = Grid::cubic(2, 16, 3.0);
  SECTION("constant field") {
    Field f = Field::zeros(g, Rep::physical);
    for (auto& z : f.v) z = cplx{0, -1.5};
    for (double p : {1.0, 2.0, 4.0})
      CHECK(lebesgue_norm(f, p) ==
            Catch::Approx(1.5 * std::pow(g.volume(), 1.0 / p)).epsilon(1e-12));
  }
  SECTION("p = 2 agrees with the inhomogeneous s = 0 norm") {
    Field f = random_field(g, 77);
    CHECK(lebesgue_norm(f, 2.0) ==
          Catch::Approx(sobolev_norm(f, 0.0, false)).epsilon(1e-12));
  }
  SECTION("single mode has constant modulus") {
    Field f = Field::zeros(g, Rep::spectral);
    f.v[linear_index(g, 3, 2, 0)] = 0.8 * std::sqrt(double(g.points()));
    const double l4 = lebesgue_norm(f, 4.0);
    CHECK(l4 * l4 * l4 * l4 ==
          Catch::Approx(std::pow(0.8, 4) * g.volume()).epsilon(1e-12));
  }
}

TEST_CASE("dealias: band pass-through, high modes zeroed, cubic exactness") {
  Grid g = Grid::cubic(2, 16, 2 * kPi);
  SECTION("band-limited field unchanged") {
    Field f = random_field(g, 11, 1.0, g.n[0] / 3);
    CHECK(max_abs_diff(dealias(f), f) < 1e-15);
  }
  SECTION("full-spectrum field: high modes exactly zero") {
    Field f = random_field(g, 12);
    Field d = dealias(f);
    for_each_mode(g, [&](std::size_t lin, double, double, double) {
      if (!dealias_keeps(g, lin)) CHECK(d.v[lin] == cplx{0, 0});
    });
  }
  SECTION("dealiased cubic equals the convolution oracle on low modes") {
    // support within |k| <= 2 on n = 16: triple sums reach |k| <= 6, the
    // cyclic images land outside the retained band, so the pointwise
    // product is exact there
    Field f = random_field(g, 13, 0.5, 2);
    Field direct = cubic_nonlinearity(f);
    Field oracle = convolution_cubic(f);
    CHECK(max_abs_diff(transform(direct, Rep::spectral), oracle) < 1e-12);
  }
}

TEST_CASE("littlewood_paley: annulus selectivity and reconstruction") {
  Grid g = Grid::cubic(2, 32, 2 * kPi);
  SECTION("plane wave on its own shell") {
    Field f = Field::zeros(g, Rep::spectral);
    f.v[linear_index(g, 4, 0, 0)] = {1.0, 0.5};  // |xi| = 4
    CHECK(max_abs_diff(littlewood_paley(f, 4.0), f) < 1e-14);
    CHECK(l2_norm(littlewood_paley(f, 1.0)) < 1e-14);
    // far-separated blocks vanish (overlap only with neighbours)
    CHECK(l2_norm(littlewood_paley(f, 16.0)) < 1e-14);
  }
  SECTION("P_1 captures the zero mode") {
    Field f = Field::zeros(g, Rep::spectral);
    f.v[0] = {2.0, 0.0};
    CHECK(max_abs_diff(littlewood_paley(f, 1.0), f) < 1e-14);
  }
  SECTION("partition of unity on random fields") {
    Field f = random_field(g, 44);
    Field sum = Field::zeros(g, Rep::spectral);
    for (double M : littlewood_paley_blocks(g))
      sum = sum + littlewood_paley(f, M);
    double scale = 0;
    for (const auto& z : f.v) scale = std::max(scale, std::abs(z));
    CHECK(max_abs_diff(sum, f) < 1e-10 * scale);
  }
  SECTION("rejects non-dyadic M") {
    Field f = random_field(g, 1);
    CHECK_THROWS_AS(littlewood_paley(f, 3.0), InvalidMultiplier);
    CHECK_THROWS_AS(littlewood_paley(f, 0.5), InvalidMultiplier);
  }
}

TEST_CASE("plancherel: physical and spectral L2 agree") {
  Grid g = Grid::cubic(3, 12, 1.7);
  Field f = random_field(g, 91);
  Field ph = transform(f, Rep::physical);
  double phys = 0;
  for (const auto& z : ph.v) phys += std::norm(z);
  double spec = 0;
  for (const auto& z : f.v) spec += std::norm(z);
  CHECK(std::sqrt(g.cell() * phys) ==
        Catch::Approx(std::sqrt(g.cell() * spec)).epsilon(1e-12));
}

TEST_CASE("translation leaves norms invariant") {
  Grid g = Grid::cubic(2, 16, 2 * kPi);
  Field f = random_field(g, 55);
  Field t = translate(f, {1.0, 0.5, 0.0});
  CHECK(l2_norm(t) == Catch::Approx(l2_norm(f)).epsilon(1e-12));
  CHECK(sobolev_norm(t, 0.8, true) ==
        Catch::Approx(sobolev_norm(f, 0.8, true)).epsilon(1e-12));
}
