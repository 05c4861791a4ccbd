#include <doctest.h>

#include <cmath>

#include "bpdg/error.hpp"
#include "bpdg/mesh.hpp"
#include "bpdg/quadrature.hpp"

using namespace bpdg;

TEST_CASE("single cell mesh") {
  const TensorMesh m = build_mesh(1, 1, 1, 1.0, 1.0);
  CHECK(m.cell_count() == 1);
  CHECK(m.x_edges() == std::vector<double>{0.0, 1.0});
  CHECK(m.p_edges() == std::vector<double>{0.0, 1.0});
  CHECK(m.mu_edges() == std::vector<double>{-1.0, 1.0});
  CHECK(m.cell_volume(0, 0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("x edges bisect") {
  const TensorMesh m = build_mesh(2, 1, 1, 1.0, 1.0);
  CHECK(m.x_edges() == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("tiny extents keep positive volumes") {
  const TensorMesh m = build_mesh(4, 4, 4, 1e-6, 0.3);
  CHECK(m.cell_count() == 64);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t j = 0; j < 4; ++j) CHECK(m.cell_volume(i, k, j) > 0.0);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(m.x_edges()[j] < m.x_edges()[j + 1]);
    CHECK(m.p_edges()[j] < m.p_edges()[j + 1]);
    CHECK(m.mu_edges()[j] < m.mu_edges()[j + 1]);
  }
}

TEST_CASE("cell volume of a shifted p cell") {
  const TensorMesh m({0.0, 1.0}, {0.0, 1.0, 2.0}, {-1.0, 0.0, 1.0});
  CHECK(m.cell_volume(0, 1, 1) == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  // Independent check by 1D quadrature of p^2 over [1, 2].
  CHECK(integrate([](double p) { return p * p; }, 1.0, 2.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(m.cell_volume(1, 0, 0), std::out_of_range);
}

TEST_CASE("total volume") {
  const TensorMesh m = build_mesh(3, 5, 7, 2.5, 4.0);
  CHECK(m.total_volume() == doctest::Approx(2.5 * 64.0 / 3.0 * 2.0).epsilon(1e-12));
}

TEST_CASE("bad mesh parameters") {
  CHECK_THROWS_AS(build_mesh(0, 1, 1, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_mesh(1, 1, 1, -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_mesh(1, 1, 1, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(TensorMesh({0.0, 0.0, 1.0}, {0.0, 1.0}, {-1.0, 1.0}), ConfigError);
}

TEST_CASE("edge points locate to the lower cell") {
  const TensorMesh m = build_mesh(4, 4, 1, 1.0, 2.0);
  CHECK(m.locate_p(0.5) == 0);
  CHECK(m.locate_p(0.51) == 1);
  CHECK(m.locate_p(2.0) == 3);
  CHECK(m.locate_x(0.0) == 0);
}

TEST_CASE("lobatto three points") {
  const QuadratureRule r = gauss_lobatto(3);
  REQUIRE(r.n == 3);
  CHECK(r.nodes[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(r.nodes[1]) < 1e-15);
  CHECK(r.nodes[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r.weights[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(r.weights[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("gauss two points") {
  const QuadratureRule r = gauss_legendre(2);
  CHECK(r.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rules are exact to their classical degree") {
  for (QuadratureKind kind : {QuadratureKind::gauss_legendre, QuadratureKind::gauss_lobatto})
    for (int n = kind == QuadratureKind::gauss_lobatto ? 2 : 1; n <= 12; ++n) {
      const QuadratureRule r = quadrature(kind, n);
      double wsum = 0.0;
      for (double w : r.weights) {
        CHECK(w > 0.0);
        wsum += w;
      }
      CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
      for (int d = 0; d <= r.exactness(); ++d) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += r.weights[j] * std::pow(r.nodes[j], d);
        const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(std::abs(s - exact) <= 1e-13 * std::max(1.0, exact));
      }
      if (kind == QuadratureKind::gauss_lobatto) {
        CHECK(r.nodes.front() == -1.0);
        CHECK(r.nodes.back() == 1.0);
        CHECK(r.weights.front() == doctest::Approx(r.weights.back()).epsilon(1e-15));
      }
    }
}

TEST_CASE("unsupported rule sizes") {
  CHECK_THROWS_AS(gauss_lobatto(1), ConfigError);
  CHECK_THROWS_AS(gauss_legendre(0), ConfigError);
}
