#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "bpdg/diagnostics.hpp"
#include "bpdg/verification.hpp"

using namespace bpdg;

namespace {
std::shared_ptr<const TensorMesh> mesh(int nx, int np, int nmu, double L, double pmax) {
  return std::make_shared<const TensorMesh>(build_mesh(nx, np, nmu, L, pmax));
}

// Phi = 0.3 x - 0.15 x^2 on [0, 2]: equal end values, so e^H is continuous across the wrap.
PotentialSolution bump() {
  PotentialSolution pot;
  pot.phi = PiecewisePolynomial({0.0, 2.0}, {{0.0, 0.3, -0.15}});
  pot.E = PiecewisePolynomial({0.0, 2.0}, {{-0.3, 0.3}});
  return pot;
}

DgField two_level(std::shared_ptr<const TensorMesh> M, double left, double right) {
  DgField f(M, 1);
  for (std::size_t k = 0; k < M->np(); ++k)
    for (std::size_t m = 0; m < M->nmu(); ++m) {
      f.cell(M->index(0, k, m))[0] = left;
      f.cell(M->index(1, k, m))[0] = right;
    }
  return f;
}
}  // namespace

TEST_CASE("entropy norm") {
  const auto M = mesh(1, 1, 1, 1.0, 1.0);
  const BandModel band = BandModel::parabolic(1.0, 1.0);
  const PotentialSolution zero = PotentialSolution::zero(1.0);
  CHECK(entropy_norm(DgField(M, 1), zero, band, 1.0) == 0.0);
  const DgField one = project([](double, double, double) { return 1.0; }, M, 1);
  const double oracle = 2.0 * integrate([](double p) { return std::exp(0.5 * p * p) * p * p; }, 0.0, 1.0, 20, 8);
  // degree + 5 Gauss points leave a ~2e-10 quadrature error on this weight
  CHECK(entropy_norm(one, zero, band, 1.0) == doctest::Approx(oracle).epsilon(1e-9));
  DgField f = random_positive_field(mesh(2, 3, 2, 1.0, 2.0), 1, 4);
  const double n1 = entropy_norm(f, zero, band, 1.0);
  f.scale(-3.0);
  CHECK(entropy_norm(f, zero, band, 1.0) == doctest::Approx(9.0 * n1).epsilon(1e-14));
  CHECK(n1 > 0.0);
}

TEST_CASE("jump dissipation of a single x face") {
  const auto M = mesh(2, 2, 2, 1.0, 1.5);
  const BandModel band = BandModel::parabolic(1.0, 1.5);
  const PotentialSolution zero = PotentialSolution::zero(1.0);
  const DgField f = two_level(M, 1.0, 0.25);
  // (1/4) J^2 int p^2 |mu| v(p) e^eps dp dmu, with int |mu| dmu = 1
  const double face = integrate([](double p) { return p * p * p * std::exp(0.5 * p * p); }, 0.0, 1.5, 20, 8);
  const double J = 0.75;
  CHECK(jump_dissipation(f, zero, band, 1.0, XBoundary::inflow) == doctest::Approx(0.25 * J * J * face).epsilon(1e-10));
  // Periodic x adds the wrap face with the same jump.
  CHECK(jump_dissipation(f, zero, band, 1.0, XBoundary::periodic) == doctest::Approx(0.5 * J * J * face).epsilon(1e-10));
  const DgField g = two_level(M, 1.0, -0.5);
  CHECK(jump_dissipation(g, zero, band, 1.0, XBoundary::inflow) ==
        doctest::Approx(4.0 * jump_dissipation(f, zero, band, 1.0, XBoundary::inflow)).epsilon(1e-13));
}

TEST_CASE("continuous fields have no jumps") {
  const auto M = mesh(3, 3, 2, 2.0, 2.0);
  const BandModel band = BandModel::kane(1.0, 0.5, 2.0);
  const DgField one = project([](double, double, double) { return 1.0; }, M, 1);
  CHECK(jump_dissipation(one, PotentialSolution::zero(2.0), band, 1.0, XBoundary::periodic) <= 1e-28);
  const DgField lin = project([](double, double p, double mu) { return 1.0 + p * mu; }, M, 1);
  CHECK(jump_dissipation(lin, PotentialSolution::zero(2.0), band, 1.0, XBoundary::periodic) <= 1e-26);
  // With a field, the p_max face sees a zero exterior trace.
  CHECK(jump_dissipation(one, bump(), band, 1.0, XBoundary::periodic) > 0.0);
}

TEST_CASE("semi-discrete entropy inequality") {
  const auto M = mesh(4, 6, 4, 2.0, 4.0);
  const BandModel band = BandModel::parabolic(1.0, 4.0);
  ModelSetup s;
  s.mesh = M;
  s.band = band;
  s.boundary.x = XBoundary::periodic;

  SUBCASE("no collisions, continuous field, no field") {
    const DgField one = project([](double, double, double) { return 1.0; }, M, 1);
    const EntropyCheck c = semi_discrete_entropy_check(one, PotentialSolution::zero(2.0), s);
    CHECK(std::abs(c.lhs) <= 1e-12);
    CHECK(std::abs(c.rhs) <= 1e-12);
    CHECK(c.holds);
  }
  SUBCASE("upwind transport dissipates twice the jump term") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
      const DgField f = random_positive_field(M, 1, seed, [&](double, double p, double) { return std::exp(-band.energy(p)); });
      const EntropyCheck c = semi_discrete_entropy_check(f, bump(), s);
      CHECK(c.holds);
      CHECK(c.lhs == doctest::Approx(2.0 * c.rhs).epsilon(1e-6));
    }
  }
  SUBCASE("random positive fields with collisions") {
    s.scattering = ScatteringParams::thermal(0.1, 0.5, 0.05);
    for (unsigned seed = 1; seed <= 20; ++seed) {
      const DgField f = random_positive_field(M, 1, 40 + seed, [&](double, double p, double) { return std::exp(-band.energy(p)); });
      const EntropyCheck c = semi_discrete_entropy_check(f, bump(), s);
      CHECK(c.holds);
      CHECK(c.lhs <= 0.0);
    }
  }
  SUBCASE("equilibrium") {
    s.scattering = ScatteringParams::thermal(0.1, 0.5);
    const auto fine = mesh(1, 24, 2, 2.0, 4.0);
    const DgField eq = project([&](double, double p, double) { return std::exp(-band.energy(p)); }, fine, 1);
    const EntropyCheck c = semi_discrete_entropy_check(eq, PotentialSolution::zero(2.0), s);
    const CollisionOperator C(fine, 1, band, s.scattering);
    CHECK(c.holds);
    // Only the projection error of the Maxwellian is left.
    CHECK(std::abs(c.lhs) <= 1e-3 * C.nu_max() * entropy_norm(eq, PotentialSolution::zero(2.0), band, 1.0));
    CHECK(std::abs(c.rhs) <= 1e-12);
  }
  SUBCASE("skipped for inflow boundaries") {
    s.boundary.x = XBoundary::inflow;
    CHECK(semi_discrete_entropy_check(DgField(M, 1), PotentialSolution::zero(2.0), s).skipped);
  }
}

TEST_CASE("value range of a piecewise polynomial") {
  const PiecewisePolynomial u({0.0, 1.0, 2.0}, {{0.0, 1.0}, {1.0, -2.0}});
  const auto [lo, hi] = value_range(u);
  CHECK(lo == doctest::Approx(-1.0));
  CHECK(hi == doctest::Approx(1.0));
}

TEST_CASE("csv and snapshot layout") {
  CHECK(DiagnosticsCsv::header() ==
        "t,dt,binding,mass,entropy_norm,jump_dissipation,J_min,J_max,min_control_value,limiter_count,chi_mass_leak");
  DiagnosticsRow r;
  r.t = 0.1;
  r.binding = "mu";
  r.limiter_count = 3;
  const std::string row = DiagnosticsCsv::format(r);
  CHECK(std::count(row.begin(), row.end(), ',') == 10);
  CHECK(row.find(",mu,") != std::string::npos);

  const auto M = mesh(2, 2, 1, 1.0, 1.0);
  const DgField f = project([](double x, double, double) { return 1.0 + x; }, M, 1);
  const auto path = std::filesystem::temp_directory_path() / "bpdg_snapshot_test.csv";
  write_snapshot(path.string(), f, BandModel::parabolic(1.0, 1.0), 0.5, "00ff");
  std::ifstream in(path);
  std::string head, cols, first;
  std::getline(in, head);
  std::getline(in, cols);
  std::getline(in, first);
  CHECK(head.find("config_hash=00ff") != std::string::npos);
  CHECK(head.find("degree=1") != std::string::npos);
  CHECK(first.rfind("0,0,0,", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), ',') == 3 + 8);
  int lines = 1;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 4);
  std::filesystem::remove(path);
}
