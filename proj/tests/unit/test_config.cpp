#include <doctest.h>

#include <string>

#include "bpdg/config.hpp"
#include "bpdg/error.hpp"
#include "bpdg/scenario.hpp"

using namespace bpdg;

namespace {
std::string preset(const char* name) { return std::string(BPDG_CONFIG_DIR) + "/" + name; }

std::string error_of(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_CASE("periodic preset") {
  const SimulationConfig c = parse_config(preset("periodic-relaxation.cfg"));
  CHECK(c.mesh.nx == 16);
  CHECK(c.mesh.np == 16);
  CHECK(c.mesh.nmu == 8);
  CHECK(c.poisson.bc == "periodic");
  CHECK(c.validate().empty());
  // Keys absent from the file keep their defaults.
  CHECK(c.run.max_steps == RunConfig{}.max_steps);
}

TEST_CASE("diode preset populates every block") {
  const SimulationConfig c = parse_config(preset("diode-400nm.cfg"));
  CHECK(c.poisson.bc == "dirichlet");
  CHECK(c.poisson.phi0 > 0.0);
  CHECK(c.poisson.doping == "nplus-n-nplus");
  REQUIRE(c.poisson.junctions.size() == 2);
  CHECK(c.poisson.junctions[0] < c.poisson.junctions[1]);
  CHECK(c.band.kind == "kane");
  CHECK(c.scattering.K > 0.0);
  const ModelSetup s = make_setup(c);
  CHECK(s.boundary.x == XBoundary::inflow);
  CHECK(s.boundary.left_density == c.poisson.n_plus);
}

TEST_CASE("minimal file gets defaults") {
  const SimulationConfig c = parse_config_string("[mesh]\nnx = 4\n");
  CHECK(c.mesh.nx == 4);
  CHECK(c.mesh.np == MeshConfig{}.np);
  CHECK(c.rk_order() == 2);
  const SimulationConfig d = parse_config_string("[numerics]\ndegree = 2\n");
  CHECK(d.rk_order() == 3);
  CHECK(parse_config_string("[band]\nkind = kane\n").band.alpha_k == 0.5);
  CHECK(parse_config_string("[band]\nkind = kane\nalpha_k = 0.2\n").band.alpha_k == 0.2);
  CHECK(parse_config_string("").band.alpha_k == 0.0);
}

TEST_CASE("validation names the key") {
  CHECK(error_of("[mesh]\np_max = -1\n").find("mesh.p_max") != std::string::npos);
  CHECK(error_of("[mesh]\nnx = two\n").find("mesh.nx") != std::string::npos);
  CHECK(error_of("[numerics]\nalpha = 1.5\n").find("numerics.alpha") != std::string::npos);
}

TEST_CASE("every problem is listed in one pass") {
  const std::string e = error_of("[mesh]\nnx = 0\nL = -2\nbogus = 1\n[band]\nkind = flat\n[nowhere]\na = b\n");
  CHECK(e.find("mesh.nx") != std::string::npos);
  CHECK(e.find("mesh.L") != std::string::npos);
  CHECK(e.find("mesh.bogus") != std::string::npos);
  CHECK(e.find("band.kind") != std::string::npos);
  CHECK(e.find("nowhere") != std::string::npos);
}

TEST_CASE("serialization round trip") {
  for (const char* name : {"periodic-relaxation.cfg", "diode-400nm.cfg"}) {
    const SimulationConfig c = parse_config(preset(name));
    const std::string once = serialize(c);
    const std::string twice = serialize(parse_config_string(once));
    CHECK(once == twice);
    CHECK(config_hash(c) == config_hash(parse_config_string(once)));
    CHECK(config_hash(c).size() == 16);
  }
  SimulationConfig a = parse_config(preset("periodic-relaxation.cfg"));
  SimulationConfig b = a;
  b.mesh.L = 0.1 + 0.2;  // not exactly 0.3; must survive the round trip
  CHECK(parse_config_string(serialize(b)).mesh.L == b.mesh.L);
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("missing file") { CHECK_THROWS_AS(parse_config("/nonexistent/x.cfg"), ConfigError); }
