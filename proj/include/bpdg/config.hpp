#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bpdg {

struct MeshConfig {
  int nx = 16, np = 16, nmu = 8;
  double L = 10.0, p_max = 7.5;
};

struct BandConfig {
  std::string kind = "parabolic";  // parabolic | kane
  double m_star = 1.0;
  double alpha_k = 0.0;
};

struct ScatteringConfig {
  double K = 0.0;
  double hbar_omega = 0.5;
  std::string n_ph = "thermal";  // thermal | <number>
  double c0 = 0.0;
};

struct PoissonConfig {
  std::string bc = "periodic";  // periodic | dirichlet
  double phi0 = 0.0;
  double q = 1.0;
  double epsilon_perm = 1.0;
  std::string doping = "uniform";  // uniform | nplus-n-nplus
  double doping_level = 1.0;
  double n_plus = 1.0, n = 0.1;
  std::vector<double> junctions;  // two positions for nplus-n-nplus
  bool frozen = false;
  double compat_tol = 1e-10;
};

struct NumericsConfig {
  int degree = 1;
  int rk = 0;  // 0 picks 2 for degree <= 1 and 3 otherwise
  double cfl_safety = 0.9;
  bool limiter = true;
  std::string alpha = "auto";  // auto | <value in (0, 1)>
  std::string formulation = "standard";  // standard | entropy
  std::string collision_route = "whole";  // whole | split
};

struct RunConfig {
  double t_final = 1.0;
  long max_steps = 1000000;
  int snapshot_every = 0;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
};

// f = n(x) g(p, mu) with n = base (1 + amplitude cos(2 pi mode x / L)) and g a drifting
// Maxwellian at temperature T, normalized so that rho = n.
struct InitialConfig {
  std::string density = "doping";  // doping | <number>
  double amplitude = 0.0;
  int mode = 1;
  double temperature = 1.0;
  double drift = 0.0;
  bool neutralize = true;  // rescale so that int rho = int N
};

struct SimulationConfig {
  MeshConfig mesh;
  BandConfig band;
  ScatteringConfig scattering;
  PoissonConfig poisson;
  NumericsConfig numerics;
  RunConfig run;
  InitialConfig initial;

  int rk_order() const { return numerics.rk != 0 ? numerics.rk : (numerics.degree <= 1 ? 2 : 3); }
  // Error messages, one per offending key; empty when valid.
  std::vector<std::string> validate() const;
};

// Throws ConfigError listing every problem found.
SimulationConfig parse_config_string(const std::string& text);
SimulationConfig parse_config(const std::string& path);
// Canonical text form; parse_config_string(serialize(c)) reproduces c.
std::string serialize(const SimulationConfig& c);
// FNV-1a over the canonical form, as 16 hex digits.
std::string config_hash(const SimulationConfig& c);

}  // namespace bpdg
