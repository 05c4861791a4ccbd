#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bpdg/config.hpp"
#include "bpdg/error.hpp"
#include "bpdg/time_integration.hpp"
#include "bpdg/verification.hpp"

using namespace bpdg;

namespace {
std::shared_ptr<const TensorMesh> mesh(int nx, int np, int nmu, double L, double pmax) {
  return std::make_shared<const TensorMesh>(build_mesh(nx, np, nmu, L, pmax));
}

ModelSetup periodic_setup(std::shared_ptr<const TensorMesh> M, const BandModel& band, ScatteringParams sc) {
  ModelSetup s;
  s.mesh = M;
  s.band = band;
  s.scattering = sc;
  s.boundary.x = XBoundary::periodic;
  s.frozen = true;
  return s;
}

double l2_diff(const DgField& a, const DgField& b) {
  DgField d = a;
  d.axpy(-1.0, b);
  return std::sqrt(weighted_norm2(d));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}
}  // namespace

TEST_CASE("stages are convex combinations") {
  for (int order = 1; order <= 3; ++order) {
    const auto st = shu_osher_stages(order);
    CHECK(st.size() == static_cast<std::size_t>(order));
    CHECK(st[0].a == 0.0);
    for (const auto& s : st) {
      CHECK(s.a >= 0.0);
      CHECK(s.b >= 0.0);
      CHECK(s.a + s.b == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
  CHECK_THROWS(shu_osher_stages(4));
}

TEST_CASE("zero step is the identity") {
  const auto M = mesh(3, 4, 2, 1.0, 3.0);
  const BandModel band = BandModel::parabolic(1.0, 3.0);
  auto op = std::make_shared<SpatialOperator>(periodic_setup(M, band, ScatteringParams::thermal(0.1, 0.5)));
  op->freeze(PotentialSolution::zero(1.0));
  const DgField f = random_positive_field(M, 1, 3);
  Solver s(op, f, {});
  std::size_t limited = 0;
  CHECK(s.euler(s.field(), 0.0, limited).data() == s.field().data());
}

TEST_CASE("x-uniform field without field or collisions is stationary") {
  const auto M = mesh(4, 4, 2, 1.0, 3.0);
  const BandModel band = BandModel::parabolic(1.0, 3.0);
  auto op = std::make_shared<SpatialOperator>(periodic_setup(M, band, {}));
  op->freeze(PotentialSolution::zero(1.0));
  const DgField f0 = project([&](double, double p, double mu) { return std::exp(-band.energy(p)) * (1 + 0.3 * mu); }, M, 1);
  Solver s(op, f0, {});
  for (int n = 0; n < 20; ++n) s.step();
  CHECK(l2_diff(s.field(), f0) <= 1e-13 * std::sqrt(weighted_norm2(f0)));
}

TEST_CASE("the residual map is linear") {
  const auto M = mesh(3, 4, 2, 1.0, 3.0);
  const BandModel band = BandModel::kane(1.0, 0.5, 3.0);
  auto op = std::make_shared<SpatialOperator>(periodic_setup(M, band, ScatteringParams::thermal(0.1, 0.5, 0.05)));
  PotentialSolution pot;
  pot.phi = PiecewisePolynomial({0.0, 1.0}, {{0.0, 0.2, -0.2}});
  pot.E = PiecewisePolynomial({0.0, 1.0}, {{-0.2, 0.4}});
  const DgField f = random_positive_field(M, 1, 1), g = random_positive_field(M, 1, 2);
  DgField h = f;
  h.axpy(2.0, g);
  DgField Rf, Rg, Rh;
  op->rhs(f, pot, Rf);
  op->rhs(g, pot, Rg);
  op->rhs(h, pot, Rh);
  Rh.axpy(-1.0, Rf);
  Rh.axpy(-2.0, Rg);
  double worst = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < Rh.data().size(); ++j) {
    worst = std::max(worst, std::abs(Rh.data()[j]));
    scale = std::max(scale, std::abs(Rf.data()[j]));
  }
  CHECK(worst <= 1e-13 * scale);
}

TEST_CASE("temporal order") {
  // Same spatial operator at three step sizes; spatial error cancels in the differences.
  const auto M = mesh(16, 4, 4, 1.0, 1.0);
  const BandModel band = BandModel::parabolic(1.0, 1.0);
  auto op = std::make_shared<SpatialOperator>(periodic_setup(M, band, {}));
  op->freeze(PotentialSolution::zero(1.0));
  const DgField f0 = project([](double x, double, double) { return 1.0 + 0.5 * std::sin(2 * std::acos(-1.0) * x); }, M, 1);
  for (int rk : {2, 3}) {
    std::vector<DgField> out;
    for (double dt : {0.004, 0.002, 0.001}) {
      SolverOptions o;
      o.rk = rk;
      o.limiter = false;
      o.fixed_dt = dt;
      Solver s(op, f0, o);
      while (s.time() < 0.2 - 1e-12) s.step(0.2 - s.time());
      out.push_back(s.field());
    }
    const double order = std::log2(l2_diff(out[0], out[1]) / l2_diff(out[1], out[2]));
    CHECK(order >= rk - 0.1);
  }
}

TEST_CASE("identical configs replay bit for bit") {
  namespace fs = std::filesystem;
  SimulationConfig c = parse_config(std::string(BPDG_CONFIG_DIR) + "/periodic-relaxation.cfg");
  c.mesh = {4, 6, 2, 10.0, 9.0};
  c.run.max_steps = 5;
  c.run.t_final = 100.0;
  const fs::path base = fs::temp_directory_path() / "bpdg_replay";
  c.run.output_dir = (base / "a").string();
  const RunSummary a = run(c);
  c.run.output_dir = (base / "b").string();
  const RunSummary b = run(c);
  CHECK(a.failure.empty());
  CHECK(a.steps == 5);
  CHECK(a.config_hash != "");
  const std::string da = slurp(base / "a" / "diagnostics.csv");
  CHECK(da == slurp(base / "b" / "diagnostics.csv"));
  CHECK(std::count(da.begin(), da.end(), '\n') == 6);
  CHECK(fs::exists(base / "a" / "snapshot_000000.csv"));
  fs::remove_all(base);
}

TEST_CASE("net periodic charge aborts the run") {
  namespace fs = std::filesystem;
  SimulationConfig c = parse_config(std::string(BPDG_CONFIG_DIR) + "/periodic-relaxation.cfg");
  c.mesh = {4, 6, 2, 10.0, 9.0};
  c.numerics.formulation = "standard";
  c.initial.neutralize = false;
  c.initial.density = "1.5";
  c.run.max_steps = 3;
  const fs::path dir = fs::temp_directory_path() / "bpdg_fail";
  c.run.output_dir = dir.string();
  // Net charge breaks periodic compatibility at the first solve.
  CHECK_THROWS_AS(run(c), CompatibilityError);
  fs::remove_all(dir);
}
