#include <doctest.h>

#include <cmath>

#include "bpdg/curvilinear.hpp"
#include "bpdg/error.hpp"

using namespace bpdg;

TEST_CASE("spherical field components") {
  SphericalBeta b{BandModel::parabolic(1.0, 5.0), 1.0, [](double) { return 1.5; }, [](double x) { return -1.5 * x; }};
  const auto z0 = b.beta({0.3, 0.7, 0.0});
  CHECK(z0[0] == 0.0);
  CHECK(z0[1] == 0.0);
  CHECK(z0[2] == doctest::Approx(-1.5 * 0.7));
  CHECK(std::abs(beta_dot_gradH(b, {0.3, 0.7, 0.2})) <= 1e-12);

  SphericalBeta free{BandModel::parabolic(1.0, 5.0), 1.0, [](double) { return 0.0; }, [](double) { return 0.0; }};
  const auto z1 = free.beta({0.0, 1.0, 1.0});
  CHECK(z1[0] == doctest::Approx(1.0));
  CHECK(z1[1] == 0.0);
  CHECK(z1[2] == 0.0);
  CHECK(divergence_numeric(free, {0.4, 1.3, 0.3}, 1e-4) == 0.0);
  CHECK(beta_dot_gradH(free, {0.4, 1.3, 0.3}) == 0.0);
}

TEST_CASE("kane field components") {
  KaneBeta k = default_kane_beta();
  k.E_y = [](double, double) { return 0.0; };
  CHECK(k.beta({0.2, 0.3, 1.1, 0.4, std::acos(0.0)})[4] == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(k.beta({0.2, 0.3, 1.1, 1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(k.beta({0.2, 0.3, 1.1, -1.0, 0.5}), DomainError);
}

TEST_CASE("kane field approaches a finite limit as the nonparabolicity vanishes") {
  const KaneBeta::Point z{0.3, 0.6, 0.9, 0.25, 1.2};
  const auto a = default_kane_beta(1.0, 0.7, 1e-6).beta(z);
  const auto b = default_kane_beta(1.0, 0.7, 1e-8).beta(z);
  for (int j = 0; j < 5; ++j) {
    CHECK(std::isfinite(a[j]));
    CHECK(std::abs(a[j] - b[j]) <= 1e-5 * (1.0 + std::abs(b[j])));
  }
}

TEST_CASE("identity suites") {
  const BetaReport s = verify_spherical(default_spherical_beta(BandModel::kane(1.0, 0.5, 5.0)), 1000, 1);
  const BetaReport k = verify_kane(default_kane_beta(), 1000, 1);
  for (const BetaReport& r : {s, k}) {
    CHECK(r.points == 1000);
    CHECK(r.max_div <= 1e-6 * r.max_beta);
    CHECK(r.max_orth_rel <= 1e-12);
    CHECK(r.pass);
  }
}
