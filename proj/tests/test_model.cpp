#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <srchi/model.hpp>

using namespace srchi;
using doctest::Approx;

TEST_CASE("gamma_combine evaluates the defining arithmetic") {
  CHECK(gamma_combine({5, 1, 1}, {1.0, 0.0, 0.1}) == Approx(2.55));
  CHECK(gamma_combine({8, 0, 0}, {1.0, 0.1, 0.0}) == Approx(4.0));
  CHECK(gamma_combine({0, 0, 0}, {1.0, 0.3, 0.7}) == 0.0);
}

TEST_CASE("gamma_combine rejects negative and nonfinite coefficients") {
  CHECK_THROWS_AS(gamma_combine({-2, 0, 0}, {1.0, 0.0, 0.0}),
                  InvalidParameterError);
  CHECK_THROWS_AS(gamma_combine({1, -1, 0}, {1.0, 0.0, 0.0}),
                  InvalidParameterError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(gamma_combine({inf, 0, 0}, {1.0, 0.0, 0.0}),
                  InvalidParameterError);
}

TEST_CASE("gamma_combine is exactly linear under rate doubling") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const GammaTriple t{u(rng), u(rng), u(rng)};
    const DampingRates g{u(rng) + 0.1, u(rng), u(rng)};
    const DampingRates g2{2 * g.gamma_r, 2 * g.gamma_d, 2 * g.gamma_n};
    CHECK(gamma_combine(t, g2) == 2.0 * gamma_combine(t, g));
  }
}

TEST_CASE("resonance function at marked points") {
  const DampingRates g{1.0, 0.0, 0.1};

  SUBCASE("purely imaginary on resonance") {
    const cplx f = resonance_fn({5, 1, 1}, g, 0.0);
    CHECK(f.real() == 0.0);
    CHECK(f.imag() == Approx(-1.0 / 2.55));
  }
  SUBCASE("equal real and imaginary magnitude at detuning = width") {
    const cplx f = resonance_fn({5, 1, 1}, g, 2.55);
    CHECK(f.real() == Approx(1.0 / 5.1));
    CHECK(f.imag() == Approx(-1.0 / 5.1));
  }
  SUBCASE("far-detuned complex reciprocal") {
    const cplx f = resonance_fn({5, 0, 1}, g, 100.0);
    const double denom = 100.0 * 100.0 + 2.55 * 2.55;
    CHECK(f.real() == Approx(100.0 / denom));
    CHECK(f.imag() == Approx(-2.55 / denom));
  }
}

TEST_CASE("resonance function pole is rejected") {
  CHECK_THROWS_AS(resonance_fn({0, 0, 0}, {1.0, 0.5, 0.5}, 0.0), PoleError);
  // Off the pole either coordinate alone is fine.
  CHECK_NOTHROW(resonance_fn({0, 0, 0}, {1.0, 0.5, 0.5}, 1e-8));
  CHECK_NOTHROW(resonance_fn({0, 0, 1}, {1.0, 0.5, 0.5}, 0.0));
}

TEST_CASE("resonance function inverts its reciprocal to machine precision") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_real_distribution<double> ud(-30.0, 30.0);
  for (int k = 0; k < 300; ++k) {
    const GammaTriple t{u(rng), u(rng), u(rng)};
    const DampingRates g{u(rng) + 0.05, u(rng), u(rng)};
    const double delta = ud(rng);
    const cplx f = resonance_fn(t, g, delta);
    const cplx one = f * resonance_inverse(t, g, delta);
    CHECK(std::abs(one - cplx(1.0, 0.0)) < 1e-14);
  }
}

TEST_CASE("resonance function is passive and peaks on resonance") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  std::uniform_real_distribution<double> ud(-50.0, 50.0);
  for (int k = 0; k < 200; ++k) {
    const GammaTriple t{u(rng), u(rng), u(rng)};
    const DampingRates g{u(rng), u(rng), u(rng)};
    const double width = gamma_combine(t, g);
    const double delta = ud(rng);
    const cplx f = resonance_fn(t, g, delta);
    CHECK(f.imag() < 0.0);
    CHECK(std::abs(f) <= 1.0 / width + 1e-15);
    CHECK(std::abs(resonance_fn(t, g, 0.0)) == Approx(1.0 / width));
    if (delta != 0.0)
      CHECK(std::abs(f) < std::abs(resonance_fn(t, g, 0.0)));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(DampingRates({0.0, 0.1, 0.1}).require_valid(),
                  InvalidParameterError);
  CHECK_THROWS_AS(DampingRates({1.0, -0.1, 0.0}).require_valid(),
                  InvalidParameterError);
  CHECK_NOTHROW(DampingRates({1.0, 0.0, 0.0}).require_valid());

  SystemDrive d;
  d.n_atoms = 0;
  CHECK_THROWS_AS(d.require_valid(), InvalidParameterError);
  d.n_atoms = 1;
  CHECK_NOTHROW(d.require_valid());
  CHECK_THROWS_AS(d.require_collective(), InvalidParameterError);
  d.n_atoms = 2;
  CHECK_NOTHROW(d.require_collective());
}
