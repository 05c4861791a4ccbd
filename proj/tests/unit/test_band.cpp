#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bpdg/band.hpp"
#include "bpdg/error.hpp"

using namespace bpdg;

TEST_CASE("parabolic closed forms") {
  const BandModel b = BandModel::parabolic(1.0, 10.0);
  CHECK(b.energy(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(b.velocity(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(b.momentum_of_energy(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(b.density_of_states(2.0) == doctest::Approx(8.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(b.eps_max() == doctest::Approx(50.0).epsilon(1e-15));
}

TEST_CASE("kane energy solves the quadratic") {
  const BandModel b = BandModel::kane(1.0, 0.5, 10.0);
  const double e = b.energy(1.0);
  CHECK(e == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));
  CHECK(std::abs(e + 0.5 * e * e - 0.5) < 1e-15);
  CHECK(b.momentum_of_energy(1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(b.energy(std::sqrt(3.0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("kane tends to parabolic") {
  const BandModel k = BandModel::kane(1.0, 1e-9, 10.0);
  CHECK(std::abs(k.energy(2.0) - 2.0) <= 1e-8);
}

TEST_CASE("velocity matches finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (const BandModel& b : {BandModel::parabolic(0.8, 6.0), BandModel::kane(1.0, 0.5, 6.0)}) {
    const double h = 1e-5;
    const double fd = (b.energy(0.5 + h) - b.energy(0.5 - h)) / (2 * h);
    CHECK(std::abs(b.velocity(0.5) - fd) <= 1e-7 * std::abs(fd));
    for (int j = 0; j < 100; ++j) {
      const double p = u(rng);
      const double d = (b.energy(p + h) - b.energy(p - h)) / (2 * h);
      CHECK(std::abs(b.velocity(p) - d) <= 1e-7 * std::abs(d));
    }
    CHECK(b.velocity(0.0) == 0.0);
    CHECK(b.energy(0.0) == 0.0);
  }
}

TEST_CASE("inverse and reciprocal identities") {
  for (const BandModel& b : {BandModel::parabolic(1.3, 8.0), BandModel::kane(0.7, 0.5, 8.0)}) {
    CHECK(b.dp_de(b.energy(0.7)) * b.velocity(0.7) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = -1.0;
    for (int j = 1; j <= 80; ++j) {
      const double p = 0.1 * j;
      CHECK(std::abs(b.momentum_of_energy(b.energy(p)) - p) <= 1e-12 * p);
      CHECK(b.energy(p) > prev);
      prev = b.energy(p);
    }
  }
}

TEST_CASE("density of states cutoff") {
  const BandModel b = BandModel::kane(1.0, 0.5, 4.0);
  CHECK(b.density_of_states(-0.1) == 0.0);
  CHECK(b.density_of_states(b.eps_max() + 1e-9) == 0.0);
  CHECK(b.density_of_states(b.eps_max()) > 0.0);
  for (int j = 0; j <= 50; ++j) CHECK(b.density_of_states(0.2 * j) >= 0.0);
  CHECK(b.chi(0.0) == 1.0);
  CHECK(b.chi(-1e-300) == 0.0);
}

TEST_CASE("negative arguments are domain errors") {
  const BandModel b = BandModel::parabolic(1.0, 1.0);
  CHECK_THROWS_AS(b.energy(-1.0), DomainError);
  CHECK_THROWS_AS(b.velocity(-1.0), DomainError);
  CHECK_THROWS_AS(b.momentum_of_energy(-1.0), DomainError);
  CHECK_THROWS_AS(b.dp_de(-1.0), DomainError);
}
