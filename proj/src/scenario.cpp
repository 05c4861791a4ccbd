#include "bpdg/scenario.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "bpdg/error.hpp"

namespace bpdg {

namespace {
double to_double(const std::string& s) {
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}
}  // namespace

BandModel make_band(const SimulationConfig& c) {
  return c.band.kind == "kane" ? BandModel::kane(c.band.m_star, c.band.alpha_k, c.mesh.p_max)
                               : BandModel::parabolic(c.band.m_star, c.mesh.p_max);
}

ScatteringParams make_scattering(const SimulationConfig& c) {
  const auto& s = c.scattering;
  if (s.n_ph == "thermal") return ScatteringParams::thermal(s.K, s.hbar_omega, s.c0);
  ScatteringParams p;
  p.K = s.K;
  p.hbar_omega = s.hbar_omega;
  p.c0 = s.c0;
  p.n_ph = to_double(s.n_ph);
  return p;
}

DopingProfile make_doping(const SimulationConfig& c) {
  const auto& p = c.poisson;
  if (p.doping == "nplus-n-nplus")
    return DopingProfile::nplus_n_nplus(c.mesh.L, p.n_plus, p.n, p.junctions.at(0), p.junctions.at(1));
  return DopingProfile::uniform(c.mesh.L, p.doping_level);
}

ModelSetup make_setup(const SimulationConfig& c) {
  if (const auto errors = c.validate(); !errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  ModelSetup s;
  s.mesh = std::make_shared<const TensorMesh>(build_mesh(c.mesh.nx, c.mesh.np, c.mesh.nmu, c.mesh.L, c.mesh.p_max));
  s.degree = c.numerics.degree;
  s.band = make_band(c);
  s.scattering = make_scattering(c);
  s.poisson.bc = c.poisson.bc == "dirichlet" ? PoissonBc::dirichlet : PoissonBc::periodic;
  s.poisson.phi0 = c.poisson.phi0;
  s.poisson.q = c.poisson.q;
  s.poisson.epsilon_perm = c.poisson.epsilon_perm;
  s.poisson.compat_tol = c.poisson.compat_tol;
  s.doping = make_doping(c);
  s.formulation = c.numerics.formulation == "entropy" ? Formulation::entropy : Formulation::standard;
  s.frozen = c.poisson.frozen;
  if (s.poisson.bc == PoissonBc::dirichlet) {
    // Charge-neutral contacts: the inflow carries the local doping density.
    s.boundary.x = XBoundary::inflow;
    s.boundary.left_density = s.doping.N.value(0.0);
    s.boundary.right_density = s.doping.N.value(c.mesh.L);
  } else {
    s.boundary.x = XBoundary::periodic;
  }
  return s;
}

std::function<double(double, double)> drifting_maxwellian(const BandModel& band, double T, double u) {
  return [band, T, u](double p, double mu) {
    const double r2 = std::max(0.0, p * p - 2.0 * p * mu * u + u * u);
    return std::exp(-band.energy(std::sqrt(r2)) / T);
  };
}

double momentum_norm(const std::function<double(double, double)>& g, double p_max) {
  return 2.0 * std::numbers::pi * integrate(
                                       [&](double p) {
                                         return p * p * integrate([&](double mu) { return g(p, mu); }, -1.0, 1.0, 12, 4);
                                       },
                                       0.0, p_max, 12, 32);
}

DgField density_times_profile(std::shared_ptr<const TensorMesh> mesh, int degree, const BandModel& band,
                              const std::function<double(double)>& n, double T, double u) {
  const auto g = drifting_maxwellian(band, T, u);
  const double Z = momentum_norm(g, mesh->p_max());
  return project([&](double x, double p, double mu) { return n(x) * g(p, mu) / Z; }, std::move(mesh), degree);
}

DgField initial_field(const SimulationConfig& c, const ModelSetup& setup) {
  const auto& ic = c.initial;
  const double L = c.mesh.L;
  const bool from_doping = ic.density == "doping";
  const double base = from_doping ? 0.0 : to_double(ic.density);
  const DopingProfile& doping = setup.doping;
  const auto n = [&](double x) {
    const double b = from_doping ? doping.N.value(x) : base;
    return b * (1.0 + ic.amplitude * std::cos(2.0 * std::numbers::pi * ic.mode * x / L));
  };
  DgField f = density_times_profile(setup.mesh, setup.degree, setup.band, n, ic.temperature, ic.drift);
  if (ic.neutralize) {
    const double target = doping.N.integral();
    const double have = compute_density(f).integral();
    if (have > 0.0 && target > 0.0) f.scale(target / have);
  }
  return f;
}

}  // namespace bpdg
