#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "wpk/error.hpp"
#include "wpk/grid_field.hpp"

using namespace wpk;

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);
}

TEST_CASE("grid arithmetic") {
  const Grid g = Grid::make(1, 8, 4.0);
  CHECK(g.spacing() == 1.0);
  CHECK(g.nyquist() == doctest::Approx(std::numbers::pi));
  CHECK(g.spacing() * 8 == 2.0 * g.half_width());
  CHECK(Grid::make(1, 1024, 20.0).spacing() == 0.0390625);
  CHECK(g.freq(0) == doctest::Approx(-4 * std::numbers::pi / 4.0));
  CHECK(g.freq(4) == 0.0);
}

TEST_CASE("grid sizing errors") {
  CHECK_THROWS_AS(Grid::make(1, 7, 4.0), SizingError);
  CHECK_THROWS_AS(Grid::make(1, 4, 4.0), SizingError);
  CHECK_THROWS_AS(Grid::make(1, 64, 0.0), SizingError);
  CHECK_THROWS_AS(Grid::make(1, 64, -1.0), SizingError);
  CHECK_THROWS_AS(Grid::make(3, 64, 1.0), SizingError);
  try {
    Grid::make(1, 12, 1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Sizing);
  }
}

TEST_CASE("fourier of a Gaussian is a Gaussian") {
  const Grid g = Grid::make(1, 1024, 20.0);
  const Field f = Field::from_function(g, [](double x) { return cplx(std::exp(-x * x / 2)); });
  const Field F = fourier(f);
  CHECK(F.domain() == Domain::Frequency);
  double err = 0.0;
  for (std::size_t k = 0; k < g.points_per_axis(); ++k) {
    const double xi = g.freq(k);
    err = std::max(err, std::abs(F[k] - std::exp(-xi * xi / 2)));
  }
  CHECK(err <= 1e-10);

  const Field back = inverse_fourier(F);
  CHECK(max_abs_diff(back, f) <= 1e-12);
}

TEST_CASE("fourier agrees with a long-double direct sum") {
  oracle::Rng rng(7);
  const auto fn = oracle::random_packet_sum(rng);
  const Grid g = Grid::make(1, 256, 12.0);
  const Field f = Field::from_function(g, fn);
  const Field F = fourier(f);
  const std::vector<oracle::cd> raw(f.samples().begin(), f.samples().end());
  double err = 0.0;
  for (std::size_t k = 0; k < 256; k += 5)
    err = std::max(err, std::abs(F[k] - oracle::direct_fourier(raw, 12.0, g.freq(k))));
  CHECK(err <= 1e-12);
}

TEST_CASE("zero maps to zero and translation becomes a phase") {
  const Grid g = Grid::make(1, 512, 16.0);
  CHECK(max_abs(fourier(Field::zeros(g))) == 0.0);
  const double a = 40 * g.spacing();
  const Field f = Field::from_function(g, [](double x) { return cplx(std::exp(-x * x)); });
  const Field fa = Field::from_function(g, [a](double x) { return cplx(std::exp(-(x - a) * (x - a))); });
  const Field F = fourier(f);
  const Field Fa = fourier(fa);
  double err = 0.0;
  for (std::size_t k = 0; k < 512; ++k)
    err = std::max(err, std::abs(Fa[k] - std::polar(1.0, -a * g.freq(k)) * F[k]));
  CHECK(err <= 1e-12);
}

TEST_CASE("Parseval and linearity on random band-limited fields") {
  oracle::Rng rng(11);
  const Grid g = Grid::make(1, 256, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> spec(256, 0.0);
    for (std::size_t k = 96; k < 160; ++k) spec[k] = rng.complex_normal();
    const Field f = inverse_fourier(Field::sampled(g, spec, Domain::Frequency));
    CHECK(l2_norm(fourier(f)) == doctest::Approx(l2_norm(f)).epsilon(1e-12));

    std::vector<cplx> other(256);
    for (auto& v : other) v = rng.complex_normal();
    const Field h = Field::sampled(g, other);
    const cplx alpha = rng.complex_normal();
    const cplx beta = rng.complex_normal();
    const Field lhs = fourier(f * alpha + h * beta);
    const Field rhs = fourier(f) * alpha + fourier(h) * beta;
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * (1.0 + max_abs(lhs)));

    const cplx ip = inner_product(f * alpha + h * beta, h);
    const cplx expect = alpha * inner_product(f, h) + beta * inner_product(h, h);
    CHECK(std::abs(ip - expect) <= 1e-12 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("random round trip") {
  oracle::Rng rng(3);
  const Grid g = Grid::make(1, 1024, 20.0);
  std::vector<cplx> s(1024);
  for (auto& v : s) v = rng.complex_normal();
  const Field f = Field::sampled(g, s);
  const Field back = inverse_fourier(fourier(f));
  CHECK(l2_norm(back - f) / l2_norm(f) <= 1e-12);
}

TEST_CASE("inverse transform of a Gaussian spectrum") {
  const Grid g = Grid::make(1, 1024, 20.0);
  std::vector<cplx> s(1024);
  for (std::size_t k = 0; k < 1024; ++k) s[k] = std::exp(-g.freq(k) * g.freq(k) / 2);
  const Field f = inverse_fourier(Field::sampled(g, s, Domain::Frequency));
  double err = 0.0;
  for (std::size_t j = 0; j < 1024; ++j) err = std::max(err, std::abs(f[j] - std::exp(-g.coord(j) * g.coord(j) / 2)));
  CHECK(err <= 1e-10);
  CHECK(max_abs(inverse_fourier(Field::zeros(g, Domain::Frequency))) == 0.0);
}

TEST_CASE("two-dimensional Gaussian pair") {
  const Grid g = Grid::make(2, 128, 12.0);
  const Field f = Field::from_function(g, [](double x, double y) {
    return cplx(std::exp(-(x * x + y * y) / 2));
  });
  const Field F = fourier(f);
  double err = 0.0;
  for (std::size_t a = 0; a < 128; ++a)
    for (std::size_t b = 0; b < 128; ++b) {
      const double r2 = g.freq(a) * g.freq(a) + g.freq(b) * g.freq(b);
      err = std::max(err, std::abs(F[a * 128 + b] - std::exp(-r2 / 2)));
    }
  CHECK(err <= 1e-10);
  CHECK(max_abs_diff(inverse_fourier(F), f) <= 1e-12);
}

TEST_CASE("Gaussian pairings") {
  const Grid g = Grid::make(1, 1024, 20.0);
  const Field phi = Field::from_function(g, [](double x) { return cplx(std::exp(-x * x / 2)); });
  const Field phi3 = Field::from_function(g, [](double x) { return cplx(std::exp(-3 * x * x / 2)); });
  CHECK(inner_product(phi, phi).real() == doctest::Approx(kSqrtPi).epsilon(1e-12));
  CHECK(inner_product(phi, phi3).real() == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-12));
  CHECK(std::abs(inner_product(phi, Field::zeros(g))) == 0.0);
  // conjugate-linear in the second slot
  const cplx i(0.0, 1.0);
  CHECK(std::abs(inner_product(phi, phi * i) + i * inner_product(phi, phi)) <= 1e-14);
}

TEST_CASE("grid mismatch and delta inputs are rejected") {
  const Grid a = Grid::make(1, 64, 4.0);
  const Grid b = Grid::make(1, 64, 5.0);
  CHECK_THROWS_AS(inner_product(Field::zeros(a), Field::zeros(b)), GridMismatchError);
  const Field d = Field::dirac(a, {0.0});
  CHECK(d.is_delta());
  CHECK_THROWS_AS(fourier(d), UnsupportedInputError);
  CHECK_THROWS_AS((void)d.samples(), UnsupportedInputError);
  CHECK_THROWS_AS(Field::sampled(a, std::vector<cplx>(10)), SizingError);
  CHECK_THROWS_AS(inverse_fourier(Field::zeros(a)), UnsupportedInputError);
}

TEST_CASE("weighted Sobolev norm") {
  const Grid g = Grid::make(1, 1024, 20.0);
  const Field phi = Field::from_function(g, [](double x) { return cplx(std::exp(-x * x / 2)); });
  CHECK(weighted_sobolev_norm(phi, {0, 0}) == doctest::Approx(l2_norm(phi)).epsilon(1e-12));
  CHECK(weighted_sobolev_norm(phi, {1, 0}) ==
        doctest::Approx(std::sqrt(kSqrtPi * 1.5)).epsilon(1e-10));
  CHECK(weighted_sobolev_norm(Field::zeros(g), {1, 2}) == 0.0);
  // weight m = 2 on a Gaussian: \int (1+x^2)^2 e^{-x^2} = sqrt(pi)(1 + 1 + 3/4)
  CHECK(weighted_sobolev_norm(phi, {0, 2}) ==
        doctest::Approx(std::sqrt(kSqrtPi * 2.75)).epsilon(1e-10));

  oracle::Rng rng(5);
  const Field f = Field::from_function(g, oracle::random_packet_sum(rng));
  double prev = 0.0;
  for (double s = -1.0; s <= 3.0; s += 0.25) {
    const double v = weighted_sobolev_norm(f, {s, 0.5});
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(weighted_sobolev_norm(phi, {NAN, 0}), ParameterError);
}
