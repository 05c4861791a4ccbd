#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bpdg/error.hpp"
#include "bpdg/poisson.hpp"

using namespace bpdg;

namespace {
constexpr double pi = std::numbers::pi;

std::shared_ptr<const TensorMesh> mesh(int nx, int np, int nmu, double L, double pmax) {
  return std::make_shared<const TensorMesh>(build_mesh(nx, np, nmu, L, pmax));
}

PiecewisePolynomial random_source(unsigned seed, double L, int pieces, int degree) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> b(pieces + 1);
  std::vector<std::vector<double>> c(pieces);
  for (int j = 0; j <= pieces; ++j) b[j] = L * j / pieces;
  for (auto& v : c)
    for (int d = 0; d <= degree; ++d) v.push_back(u(rng));
  return PiecewisePolynomial(b, c);
}

// |-phi'' - (q/eps)(N - rho)| at n random points
double residual(const PotentialSolution& s, const PiecewisePolynomial& rho, const DopingProfile& N, double q_eps,
                int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  const double L = rho.breaks().back();
  std::uniform_real_distribution<double> u(0.0, L);
  const auto d2 = s.phi.derivative().derivative();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = u(rng);
    worst = std::max(worst, std::abs(-d2.value(x) - q_eps * (N.N.value(x) - rho.value(x))));
  }
  return worst;
}
}  // namespace

TEST_CASE("density of a constant field") {
  const auto M = mesh(3, 4, 2, 1.0, 2.0);
  const DgField f = project([](double, double, double) { return 0.7; }, M, 1);
  const auto rho = compute_density(f);
  for (double x : {0.1, 0.5, 0.95}) CHECK(rho.value(x) == doctest::Approx(2 * pi * 0.7 * 8.0 / 3.0 * 2).epsilon(1e-13));
  CHECK(compute_density(DgField(M, 1)).max_abs() == 0.0);
}

TEST_CASE("density of a projected maxwellian") {
  const auto M = mesh(2, 8, 2, 1.0, 4.0);
  const DgField f = project([](double, double p, double) { return std::exp(-0.5 * p * p); }, M, 1);
  // Oracle: 2 pi * 2 * int f_h p^2 dp, with f_h evaluated cell by cell.
  double oracle = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    const double a = M->p_edges()[k], b = M->p_edges()[k + 1];
    oracle += integrate(
        [&](double p) { return evaluate(f, 0, k, 0, 0.0, 2 * (p - a) / (b - a) - 1, 0.0) * p * p; }, a, b, 8, 1);
  }
  CHECK(compute_density(f).value(0.25) == doctest::Approx(4 * pi * oracle).epsilon(1e-12));
}

TEST_CASE("current") {
  const auto M = mesh(2, 6, 4, 1.0, 3.0);
  const BandModel band = BandModel::parabolic(1.0, 3.0);
  const DgField even = project([](double, double p, double mu) { return std::exp(-p) * (1 + mu * mu); }, M, 2);
  CHECK(current(even, band).max_abs() <= 1e-14);
  // f = mu g(p) with g = 1: J = 2 pi (2/3) int_0^pmax p * p^2 dp
  const DgField odd = project([](double, double, double mu) { return mu; }, M, 1);
  CHECK(current(odd, band).value(0.3) == doctest::Approx(2 * pi * 2.0 / 3.0 * std::pow(3.0, 4) / 4).epsilon(1e-13));
}

TEST_CASE("dirichlet closed forms") {
  const DopingProfile N = DopingProfile::uniform(1.0, 2.0);
  const auto same = PiecewisePolynomial::constant({0.0, 0.5, 1.0}, 2.0);
  const PotentialSolution lin = solve_dirichlet(same, N, 1.0);
  for (double x : {0.0, 0.3, 0.8, 1.0}) {
    CHECK(lin.phi_at(x) == doctest::Approx(x).epsilon(1e-14));
    CHECK(lin.E_at(x) == doctest::Approx(-1.0).epsilon(1e-14));
  }
  // N - rho = c = 0.5, q / eps = 2
  const auto rho = PiecewisePolynomial::constant({0.0, 0.25, 1.0}, 1.5);
  const PotentialSolution s = solve_dirichlet(rho, N, 0.0, 2.0, 1.0);
  for (double x : {0.1, 0.5, 0.77}) {
    CHECK(s.phi_at(x) == doctest::Approx(2 * 0.5 * x * (1 - x) / 2).epsilon(1e-13));
    CHECK(s.E_at(x) == doctest::Approx(2 * 0.5 * (x - 0.5)).epsilon(1e-13));
  }
}

TEST_CASE("dirichlet residual on polynomial sources") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto rho = random_source(seed, 2.0, 5, 2);
    const DopingProfile N = DopingProfile::nplus_n_nplus(2.0, 3.0, 1.0, 0.4, 1.6);
    const PotentialSolution s = solve_dirichlet(rho, N, 0.7, 1.3, 0.4);
    CHECK(residual(s, rho, N, 1.3 / 0.4, 50, seed) <= 1e-10);
    CHECK(std::abs(s.phi_at(0.0)) <= 1e-14);
    CHECK(s.phi_at(2.0) == doctest::Approx(0.7).epsilon(1e-12));
    const auto dphi = s.phi.derivative();
    for (double x : {0.1, 0.9, 1.7}) CHECK(s.E_at(x) == doctest::Approx(-dphi.value(x)).epsilon(1e-12));
    // Affine in phi0 with slope x / L
    const PotentialSolution s2 = solve_dirichlet(rho, N, 1.7, 1.3, 0.4);
    CHECK(s2.phi_at(0.6) - s.phi_at(0.6) == doctest::Approx(0.6 / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("periodic cosine source") {
  const double L = 3.0, A = 0.4;
  // N - rho = A cos(2 pi x / L) with N = 1; rho projected on fine quadratic pieces.
  const int n = 64;
  std::vector<double> b(n + 1);
  std::vector<std::vector<double>> c(n);
  for (int j = 0; j <= n; ++j) b[j] = L * j / n;
  const double w = 2 * pi / L;
  for (int j = 0; j < n; ++j) {
    // Taylor expansion about the piece start to fourth order
    const double x0 = b[j], cs = std::cos(w * x0), sn = std::sin(w * x0);
    c[j] = {1 - A * cs, A * w * sn, A * w * w * cs / 2, -A * w * w * w * sn / 6, -A * std::pow(w, 4) * cs / 24};
  }
  const PiecewisePolynomial rho(b, c);
  const PotentialSolution s = solve_periodic(rho, DopingProfile::uniform(L, 1.0), 1.0, 2.0, 1e-6);
  for (double x : {0.0, 0.4, 1.5, 2.9}) CHECK(s.phi_at(x) == doctest::Approx(0.5 * A * std::pow(L / (2 * pi), 2) * std::cos(w * x)).epsilon(1e-5));
  CHECK(std::abs(s.phi.integral()) <= 1e-12);
  CHECK(s.phi_at(0.0) == doctest::Approx(s.phi_at(L)).epsilon(1e-12));
}

TEST_CASE("periodic invariants on polynomial sources") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    auto rho = random_source(seed, 2.0, 4, 3);
    const DopingProfile N = DopingProfile::uniform(2.0, 1.0);
    // Shift rho so the net charge vanishes.
    rho.add_global({1.0 - rho.integral() / 2.0});
    const PotentialSolution s = solve_periodic(rho, N);
    CHECK(residual(s, rho, N, 1.0, 50, seed) <= 1e-10);
    CHECK(std::abs(s.phi.integral()) <= 1e-12);
    CHECK(s.phi_at(0.0) == doctest::Approx(s.phi_at(2.0)).epsilon(1e-12));
    CHECK(s.E_at(0.0) == doctest::Approx(s.E_at(2.0)).epsilon(1e-12));
    // Adding a constant to both N and rho changes nothing.
    auto rho2 = rho;
    rho2.add_global({0.5});
    const PotentialSolution t = solve_periodic(rho2, DopingProfile::uniform(2.0, 1.5));
    for (double x : {0.2, 1.1, 1.9}) CHECK(t.phi_at(x) == doctest::Approx(s.phi_at(x)).epsilon(1e-12));
  }
}

TEST_CASE("periodic neutral data gives zero field") {
  const auto rho = PiecewisePolynomial::constant({0.0, 1.0, 2.0}, 3.0);
  const PotentialSolution s = solve_periodic(rho, DopingProfile::uniform(2.0, 3.0));
  CHECK(s.phi.max_abs() <= 1e-14);
  CHECK(s.E.max_abs() <= 1e-14);
}

TEST_CASE("periodic compatibility violation is rejected with its imbalance") {
  const auto rho = PiecewisePolynomial::constant({0.0, 2.0}, 0.75);
  try {
    solve_periodic(rho, DopingProfile::uniform(2.0, 1.0));
    FAIL("expected a compatibility error");
  } catch (const CompatibilityError& e) {
    CHECK(e.imbalance == doctest::Approx(0.25 * 2.0));
  }
}

TEST_CASE("doping presets") {
  const DopingProfile d = DopingProfile::nplus_n_nplus(1.0, 5.0, 1.0, 0.25, 0.75);
  CHECK(d.N.value(0.1) == 5.0);
  CHECK(d.N.value(0.5) == 1.0);
  CHECK(d.N.value(0.9) == 5.0);
  CHECK(d.N.integral() == doctest::Approx(3.0));
}
