#include <doctest.h>

#include <cmath>
#include <random>

#include "bpdg/transport.hpp"

using namespace bpdg;

namespace {
std::shared_ptr<const TensorMesh> mesh(int nx, int np, int nmu, double L, double pmax) {
  return std::make_shared<const TensorMesh>(build_mesh(nx, np, nmu, L, pmax));
}

DgField random_field(std::shared_ptr<const TensorMesh> M, int degree, unsigned seed) {
  DgField f(M, degree);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& c : f.data()) c = u(rng);
  return f;
}

PotentialSolution uniform_field(double L, double E0) {
  PotentialSolution pot;
  pot.phi = PiecewisePolynomial({0.0, L}, {{0.0, -E0}});
  pot.E = PiecewisePolynomial::constant({0.0, L}, E0);
  return pot;
}

double max_abs(const DgField& f) {
  double m = 0.0;
  for (double c : f.data()) m = std::max(m, std::abs(c));
  return m;
}

// Net outflow through the faces of cell (i, k, m) divided by its volume, from
// upwind traces evaluated directly on each face. Uniform field E0, periodic x.
double increment_oracle(const DgField& f, const BandModel& band, double E0, double q, std::size_t i, std::size_t k,
                        std::size_t m) {
  const TensorMesh& M = f.mesh();
  const QuadratureRule r = gauss_legendre(6);
  const std::size_t nx = M.nx();
  const auto at = [&](std::size_t ii, std::size_t kk, std::size_t mm, double a, double b, double c) {
    return evaluate(f, ii, kk, mm, a, b, c);
  };
  const double xl = M.x_edges()[i], pl = M.p_edges()[k], ml = M.mu_edges()[m];
  const double hx = M.dx(i), hp = M.dp(k), hm = M.dmu(m);
  double out = 0.0;
  for (int a = 0; a < r.n; ++a)
    for (int b = 0; b < r.n; ++b) {
      const double w = r.weights[a] * r.weights[b] * 0.25;
      // x faces: coefficient mu v(p), measure p^2 dp dmu
      {
        const double p = pl + 0.5 * hp * (r.nodes[a] + 1), mu = ml + 0.5 * hm * (r.nodes[b] + 1);
        const double c = mu * band.velocity(p);
        const std::size_t ir = (i + 1) % nx, il = (i + nx - 1) % nx;
        const double right = c > 0 ? at(i, k, m, 1, r.nodes[a], r.nodes[b]) : at(ir, k, m, -1, r.nodes[a], r.nodes[b]);
        const double left = c > 0 ? at(il, k, m, 1, r.nodes[a], r.nodes[b]) : at(i, k, m, -1, r.nodes[a], r.nodes[b]);
        out += w * hp * hm * p * p * c * (right - left);
      }
      // p faces: coefficient -q E mu, measure p^2 dx dmu
      {
        const double mu = ml + 0.5 * hm * (r.nodes[b] + 1);
        const double c = -q * E0 * mu;
        // The face above p-cell klo; beyond p_max the ghost is zero.
        const auto up = [&](std::size_t klo) {
          const bool has_hi = klo + 1 < M.np();
          const double vlo = at(i, klo, m, r.nodes[a], 1, r.nodes[b]);
          const double vhi = has_hi ? at(i, klo + 1, m, r.nodes[a], -1, r.nodes[b]) : 0.0;
          return c > 0 ? vlo : vhi;
        };
        const double ptop = pl + hp;
        const double flux_top = ptop * ptop * c * up(k);
        const double flux_bot = k > 0 ? pl * pl * c * up(k - 1) : 0.0;
        out += w * hx * hm * (flux_top - flux_bot);
      }
      // mu faces: coefficient -q E (1 - mu^2), measure p dx dp
      {
        const double p = pl + 0.5 * hp * (r.nodes[b] + 1);
        const double c = -q * E0;
        const auto face = [&](std::size_t mlo, double mu) {
          const double g = 1.0 - mu * mu;
          const double vlo = at(i, k, mlo, r.nodes[a], r.nodes[b], 1);
          const double vhi = at(i, k, mlo + 1, r.nodes[a], r.nodes[b], -1);
          return p * g * c * (c > 0 ? vlo : vhi);
        };
        const double top = m + 1 < M.nmu() ? face(m, ml + hm) : 0.0;
        const double bot = m > 0 ? face(m - 1, ml) : 0.0;
        out += w * hx * hp * (top - bot);
      }
    }
  return -out / M.cell_volume(i, k, m);
}
}  // namespace

TEST_CASE("upwind flux selection") {
  CHECK(upwind_flux_x(0.5, 1.0, 3.0, 7.0) == doctest::Approx(1.5));
  CHECK(upwind_flux_x(-0.5, 1.0, 3.0, 7.0) == doctest::Approx(-3.5));
  CHECK(upwind_flux_x(0.0, 2.0, 3.0, 7.0) == 0.0);
  CHECK(upwind_flux_mu(2.0, 3.0, 7.0, 1.0) == doctest::Approx(-14.0));
  CHECK(upwind_flux_mu(-2.0, 3.0, 7.0, 1.0) == doctest::Approx(6.0));
  // H_p = -q E mu
  CHECK(upwind_flux_p(1.0, -0.5, 3.0, 7.0, 1.0) == doctest::Approx(1.5));
  CHECK(upwind_flux_p(1.0, 0.5, 3.0, 7.0, 1.0) == doctest::Approx(-3.5));
}

TEST_CASE("free stream preservation with E = 0") {
  const auto M = mesh(4, 3, 4, 2.0, 3.0);
  const BandModel band = BandModel::parabolic(1.0, 3.0);
  const TransportOperator T(M, 1, band, 1.0, {}, Formulation::standard);
  DgField R;
  T.residual(project([](double, double, double) { return 2.5; }, M, 1), PotentialSolution::zero(2.0), R);
  CHECK(max_abs(R) <= 1e-13);
  T.residual(project([](double, double p, double mu) { return std::exp(-p) * (1 + mu * mu); }, M, 1),
             PotentialSolution::zero(2.0), R);
  CHECK(max_abs(R) <= 1e-13);
}

TEST_CASE("cell average increment against face quadrature") {
  const auto M = mesh(3, 3, 2, 1.0, 2.0);
  // Parabolic band: every face integrand is a polynomial, so both quadratures are exact.
  const BandModel band = BandModel::parabolic(0.8, 2.0);
  const TransportOperator T(M, 1, band, 1.0, {}, Formulation::standard);
  const DgField f = random_field(M, 1, 21);
  for (double E0 : {0.0, 0.4, -0.7}) {
    const PotentialSolution pot = uniform_field(1.0, E0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t m = 0; m < 2; ++m) {
          const double got = T.cell_average_increment(f, pot, i, k, m);
          const double want = increment_oracle(f, band, E0, 1.0, i, k, m);
          CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
        }
  }
}

TEST_CASE("mass flux telescopes") {
  const auto M = mesh(5, 4, 4, 1.0, 3.0);
  const BandModel band = BandModel::parabolic(1.0, 3.0);
  const TransportOperator T(M, 1, band, 1.0, {}, Formulation::standard);
  // Field vanishing in the top p-cell, so nothing leaves through p_max.
  DgField f = random_field(M, 1, 4);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t m = 0; m < 4; ++m)
      for (int j = 0; j < f.modes(); ++j) f.cell(M->index(i, 3, m))[j] = 0.0;
  const PotentialSolution pot = uniform_field(1.0, 0.8);
  double s = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t m = 0; m < 4; ++m) {
        const double v = M->cell_volume(i, k, m) * T.cell_average_increment(f, pot, i, k, m);
        s += v;
        scale += std::abs(v);
      }
  CHECK(std::abs(s) <= 1e-12 * scale);
}

TEST_CASE("p_max outflow only removes mass from a positive field") {
  const auto M = mesh(2, 3, 2, 1.0, 2.0);
  const BandModel band = BandModel::parabolic(1.0, 2.0);
  const TransportOperator T(M, 1, band, 1.0, {}, Formulation::standard);
  const DgField f = project([](double, double, double) { return 1.0; }, M, 1);
  for (double E0 : {0.5, -0.5}) {
    DgField R;
    T.residual(f, uniform_field(1.0, E0), R);
    double s = 0.0;
    for (std::size_t c = 0; c < R.cell_count(); ++c) s += R.cell(c)[0];
    CHECK(s < 0.0);
  }
}

TEST_CASE("single periodic cell keeps its average") {
  const auto M = mesh(1, 1, 1, 1.0, 1.0);
  const BandModel band = BandModel::parabolic(1.0, 1.0);
  const TransportOperator T(M, 1, band, 1.0, {}, Formulation::standard);
  for (unsigned seed = 1; seed <= 5; ++seed)
    CHECK(std::abs(T.cell_average_increment(random_field(M, 1, seed), PotentialSolution::zero(1.0), 0, 0, 0)) <= 1e-14);
}

TEST_CASE("inflow ghost is a scaled maxwellian") {
  const auto M = mesh(2, 4, 2, 1.0, 4.0);
  const BandModel band = BandModel::parabolic(1.0, 4.0);
  BoundarySpec bc;
  bc.x = XBoundary::inflow;
  bc.left_density = 2.0;
  bc.right_density = 0.5;
  const TransportOperator T(M, 1, band, 1.0, bc, Formulation::standard);
  CHECK(T.ghost(1.0, true) / T.ghost(1.0, false) == doctest::Approx(4.0));
  CHECK(T.ghost(2.0, true) / T.ghost(1.0, true) == doctest::Approx(std::exp(-1.5)));
  const double n = 2.0 * std::acos(-1.0) * 2.0 * integrate([&](double p) { return T.ghost(p, true) * p * p; }, 0.0, 4.0);
  CHECK(n == doctest::Approx(2.0).epsilon(1e-10));
}
