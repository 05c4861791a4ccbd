#include "bpdg/verification.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bpdg/config.hpp"
#include "bpdg/curvilinear.hpp"
#include "bpdg/diagnostics.hpp"
#include "bpdg/error.hpp"
#include "bpdg/time_integration.hpp"

namespace bpdg {

DgField random_positive_field(std::shared_ptr<const TensorMesh> mesh, int degree, std::uint64_t seed,
                              const std::function<double(double, double, double)>& envelope) {
  DgField f(mesh, degree);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> avg(0.2, 1.0), dev(-0.3, 0.3);
  const TensorMesh& M = *mesh;
  for (std::size_t i = 0; i < M.nx(); ++i)
    for (std::size_t k = 0; k < M.np(); ++k)
      for (std::size_t m = 0; m < M.nmu(); ++m) {
        double* c = f.cell(M.index(i, k, m));
        const double scale =
            envelope ? envelope(M.x_edges()[i] + 0.5 * M.dx(i), M.p_edges()[k] + 0.5 * M.dp(k),
                                M.mu_edges()[m] + 0.5 * M.dmu(m))
                     : 1.0;
        const double a = avg(rng);
        c[0] = a * scale;
        for (int j = 1; j < f.modes(); ++j) c[j] = dev(rng) * a * scale;
      }
  // c[0] is the Legendre constant mode, not the p^2-weighted average; limiting needs
  // nonnegative averages, which a dominant constant mode guarantees here.
  const ControlPointSet cp = build_control_points(M, degree);
  limit_nonnegative(f, cp);
  return f;
}

namespace {

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

}  // namespace

std::vector<CheckResult> verify_invariants(std::uint64_t seed, const WorkerPool* pool) {
  std::vector<CheckResult> out;
  const auto add = [&](std::string name, bool pass, std::string detail) {
    out.push_back({std::move(name), pass, std::move(detail)});
  };

  // Quadrature exactness on monomials.
  {
    double worst = 0.0;
    for (int n = 1; n <= 10; ++n) {
      const QuadratureRule g = gauss_legendre(n);
      for (int d = 0; d <= 2 * n - 1; ++d) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += g.weights[j] * std::pow(g.nodes[j], d);
        worst = std::max(worst, std::abs(s - (d % 2 ? 0.0 : 2.0 / (d + 1))));
      }
    }
    add("gauss rule exactness", worst < 1e-13, "max error " + num(worst));
  }

  // Kane band inverse.
  {
    const BandModel b = BandModel::kane(0.7, 0.5, 10.0);
    double worst = 0.0;
    for (int j = 1; j <= 200; ++j) {
      const double p = 0.05 * j;
      worst = std::max(worst, std::abs(b.momentum_of_energy(b.energy(p)) - p) / p);
    }
    add("band energy/momentum inverse", worst < 1e-13, "max rel error " + num(worst));
  }

  const auto mesh = std::make_shared<const TensorMesh>(build_mesh(6, 8, 4, 2.0, 6.0));
  const BandModel band = BandModel::parabolic(1.0, 6.0);
  const auto tail = [&](double, double p, double) { return std::exp(-band.energy(p)); };
  const ScatteringParams thermal = ScatteringParams::thermal(0.05, 0.7, 0.02);

  // Transport telescopes in x with E = 0.
  {
    const DgField f = random_positive_field(mesh, 1, seed, tail);
    const TransportOperator T(mesh, 1, band, 1.0, {}, Formulation::standard);
    DgField R;
    T.residual(f, PotentialSolution::zero(2.0), R, pool);
    double s = 0.0, scale = 0.0;
    for (std::size_t c = 0; c < R.cell_count(); ++c) {
      s += R.cell(c)[0];
      scale += std::abs(R.cell(c)[0]);
    }
    add("transport conserves mass (periodic, E = 0)", std::abs(s) <= 1e-12 * scale, "sum " + num(s));
  }

  // Collision conserves mass and dissipates the e^H-weighted norm.
  {
    const CollisionOperator Cs(mesh, 1, band, thermal, Formulation::standard);
    const CollisionOperator Ce(mesh, 1, band, thermal, Formulation::entropy);
    bool mass_ok = true, diss_ok = true;
    double worst_mass = 0.0, worst_diss = -1e300;
    for (int r = 0; r < 5; ++r) {
      const DgField f = random_positive_field(mesh, 1, seed + 17 * r, tail);
      DgField R;
      Cs.residual(f, PotentialSolution::zero(2.0), 1.0, R, false, pool);
      double s = 0.0, scale = 0.0;
      for (std::size_t c = 0; c < R.cell_count(); ++c) {
        s += R.cell(c)[0];
        scale += std::abs(R.cell(c)[0]);
      }
      worst_mass = std::max(worst_mass, std::abs(s) / scale);
      mass_ok = mass_ok && std::abs(s) <= 1e-12 * scale;
      const TransportOperator Te(mesh, 1, band, 1.0, {}, Formulation::entropy);
      const auto [d, dscale] = collision_dissipation(f, Ce, Te.sample_potential(PotentialSolution::zero(2.0)));
      worst_diss = std::max(worst_diss, d / dscale);
      diss_ok = diss_ok && d <= 1e-10 * dscale;
    }
    add("collision conserves mass", mass_ok, "max rel " + num(worst_mass));
    add("collision dissipates the entropy norm", diss_ok, "max (Q,f e^H)/scale " + num(worst_diss));
  }

  // Poisson residuals.
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const PiecewisePolynomial rho({0.0, 0.5, 1.3, 2.0}, {{u(rng), u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng)}});
    const DopingProfile N = DopingProfile::uniform(2.0, 0.0);
    const PotentialSolution d = solve_dirichlet(rho, N, 0.7);
    double worst = 0.0;
    const auto N_minus_rho = combine(1.0, N.N, -1.0, rho);
    const auto phi2 = d.phi.derivative().derivative();
    for (int j = 0; j < 50; ++j) {
      const double x = 2.0 * (j + 0.37) / 50.0;
      worst = std::max(worst, std::abs(-phi2.value(x) - N_minus_rho.value(x)));
    }
    add("poisson dirichlet residual", worst <= 1e-10 && std::abs(d.phi_at(2.0) - 0.7) < 1e-12, "max " + num(worst));
    bool rejected = false;
    try {
      solve_periodic(PiecewisePolynomial::constant({0.0, 2.0}, 1.0), N);
    } catch (const CompatibilityError&) {
      rejected = true;
    }
    add("poisson periodic compatibility rejection", rejected, "");
  }

  // Limiter.
  {
    DgField f(mesh, 1);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), a(0.0, 1.0);
    for (std::size_t c = 0; c < f.cell_count(); ++c) {
      f.cell(c)[0] = a(rng);
      for (int j = 1; j < f.modes(); ++j) f.cell(c)[j] = u(rng);
    }
    // Make the p^2-weighted averages nonnegative by shifting the constant mode.
    const auto avg0 = cell_averages(f);
    for (std::size_t c = 0; c < f.cell_count(); ++c)
      if (avg0[c] < 0.0) f.cell(c)[0] -= 2.0 * avg0[c];
    const ControlPointSet cp = build_control_points(*mesh, 1);
    const auto before = cell_averages(f);
    limit_nonnegative(f, cp);
    const DgField once = f;
    limit_nonnegative(f, cp);
    const auto after = cell_averages(f);
    double dav = 0.0, didem = 0.0;
    for (std::size_t c = 0; c < f.cell_count(); ++c) dav = std::max(dav, std::abs(after[c] - before[c]) / std::max(1.0, before[c]));
    for (std::size_t j = 0; j < f.data().size(); ++j) didem = std::max(didem, std::abs(f.data()[j] - once.data()[j]));
    add("limiter preserves averages and is idempotent", dav <= 1e-14 && didem <= 1e-14,
        "avg drift " + num(dav) + ", idempotence " + num(didem));
  }

  {
    const auto [al, dt] = optimal_alpha(1.0, 3.0);
    add("optimal convex split", al == 0.75 && dt == 0.75, "alpha " + num(al) + ", dt " + num(dt));
  }

  {
    bool ok = true;
    for (int order = 1; order <= 3; ++order)
      for (const auto& s : shu_osher_stages(order)) ok = ok && s.a >= 0.0 && s.b >= 0.0 && std::abs(s.a + s.b - 1.0) < 1e-15;
    add("runge-kutta stages are convex", ok, "");
  }

  // Semi-discrete entropy inequality with a frozen nonzero field.
  {
    ModelSetup s;
    s.mesh = mesh;
    s.band = band;
    s.scattering = thermal;
    s.boundary.x = XBoundary::periodic;
    PotentialSolution pot;
    pot.phi = PiecewisePolynomial({0.0, 2.0}, {{0.0, 0.3, -0.15}});
    pot.E = PiecewisePolynomial({0.0, 2.0}, {{-0.3, 0.3}});
    bool ok = true;
    double margin = 1e300;
    for (int r = 0; r < 5; ++r) {
      const DgField f = random_positive_field(mesh, 1, seed + 101 * r, tail);
      const EntropyCheck e = semi_discrete_entropy_check(f, pot, s);
      ok = ok && e.holds;
      margin = std::min(margin, (e.rhs - e.lhs) / e.scale);
    }
    add("semi-discrete entropy inequality", ok, "min relative margin " + num(margin));
  }

  {
    const BetaReport a = verify_spherical(default_spherical_beta(BandModel::kane(1.0, 0.5, 5.0)), 200, seed);
    const BetaReport b = verify_kane(default_kane_beta(), 200, seed);
    add("transport field identities", a.pass && b.pass,
        "div " + num(a.max_div / a.max_beta) + "/" + num(b.max_div / b.max_beta) + ", orth " + num(a.max_orth_rel) +
            "/" + num(b.max_orth_rel));
  }

  {
    SimulationConfig c;
    c.poisson.doping = "nplus-n-nplus";
    c.poisson.junctions = {2.5, 7.5};
    const std::string once = serialize(parse_config_string(serialize(c)));
    add("config round trip", once == serialize(parse_config_string(once)) && once == serialize(c), "");
  }
  return out;
}

std::vector<ConvergenceRow> convergence_study(int levels, const ConvergenceSetup& s, const WorkerPool* pool) {
  if (levels < 2) throw ConfigError("convergence: need at least 2 levels");
  std::vector<ConvergenceRow> rows;
  const BandModel band = BandModel::parabolic(1.0, s.p_max);
  const double L = s.L, A = s.amplitude;
  const auto f0 = [&](double x, double) { return 1.0 + A * std::sin(2.0 * std::numbers::pi * x / L); };
  for (int lev = 0; lev < levels; ++lev) {
    const auto t0 = std::chrono::steady_clock::now();
    const int nx = s.nx0 << lev;
    ModelSetup setup;
    setup.mesh = std::make_shared<const TensorMesh>(build_mesh(nx, s.np, s.nmu, L, s.p_max));
    setup.degree = s.degree;
    setup.band = band;
    setup.doping = DopingProfile::uniform(L, 0.0);
    setup.frozen = true;
    auto op = std::make_shared<SpatialOperator>(setup);
    op->freeze(PotentialSolution::zero(L));
    SolverOptions opt;
    opt.rk = s.rk;
    opt.limiter = false;
    Solver solver(op, project([&](double x, double p, double) { return f0(x, p); }, setup.mesh, s.degree), opt, pool);
    while (solver.time() < s.t_final * (1.0 - 1e-14)) solver.step(s.t_final - solver.time());

    // L2 error with p^2 weight against f0(x - v mu t, p).
    const TensorMesh& M = *setup.mesh;
    const QuadratureRule rule = gauss_legendre(s.degree + 4);
    const double t = solver.time();
    double err = 0.0;
    for (std::size_t i = 0; i < M.nx(); ++i)
      for (std::size_t k = 0; k < M.np(); ++k)
        for (std::size_t m = 0; m < M.nmu(); ++m) {
          const double jac = M.dx(i) * M.dp(k) * M.dmu(m) / 8.0;
          for (int a = 0; a < rule.n; ++a)
            for (int b = 0; b < rule.n; ++b)
              for (int c = 0; c < rule.n; ++c) {
                const double x = M.x_edges()[i] + 0.5 * M.dx(i) * (rule.nodes[a] + 1.0);
                const double p = M.p_edges()[k] + 0.5 * M.dp(k) * (rule.nodes[b] + 1.0);
                const double mu = M.mu_edges()[m] + 0.5 * M.dmu(m) * (rule.nodes[c] + 1.0);
                const double d = evaluate(solver.field(), i, k, m, rule.nodes[a], rule.nodes[b], rule.nodes[c]) -
                                 f0(x - band.velocity(p) * mu * t, p);
                err += jac * rule.weights[a] * rule.weights[b] * rule.weights[c] * p * p * d * d;
              }
        }
    ConvergenceRow r;
    r.nx = nx;
    r.error = std::sqrt(err);
    r.order = rows.empty() ? 0.0 : std::log2(rows.back().error / r.error);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(r);
  }
  return rows;
}

}  // namespace bpdg
