#include "bpdg/poisson.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bpdg/error.hpp"

namespace bpdg {

DopingProfile DopingProfile::uniform(double L, double level) {
  return {PiecewisePolynomial::constant({0.0, L}, level)};
}

DopingProfile DopingProfile::nplus_n_nplus(double L, double n_plus, double n, double a, double b) {
  if (!(0.0 < a && a < b && b < L)) throw ConfigError("doping: junctions must satisfy 0 < a < b < L");
  return {PiecewisePolynomial({0.0, a, b, L}, {{n_plus}, {n}, {n_plus}})};
}

PotentialSolution PotentialSolution::zero(double L) {
  PotentialSolution s;
  s.phi = PiecewisePolynomial::constant({0.0, L}, 0.0);
  s.E = s.phi;
  return s;
}

namespace {

template <class Moment>
PiecewisePolynomial x_profile(const DgField& f, const Moment& moment) {
  const auto& mesh = f.mesh();
  const int n1 = f.n1();
  std::vector<std::vector<double>> pieces(mesh.nx());
  for (std::size_t i = 0; i < mesh.nx(); ++i) {
    std::vector<double> leg(n1, 0.0);
    for (std::size_t k = 0; k < mesh.np(); ++k)
      for (std::size_t m = 0; m < mesh.nmu(); ++m) {
        const double* c = f.cell(mesh.index(i, k, m));
        for (int ax = 0; ax < n1; ++ax)
          for (int ap = 0; ap < n1; ++ap)
            for (int am = 0; am < n1; ++am) leg[ax] += c[DgField::mode(ax, ap, am, n1)] * moment(k, m, ap, am);
      }
    for (double& v : leg) v *= 2.0 * std::numbers::pi;
    pieces[i] = legendre_to_monomial(leg, mesh.dx(i));
  }
  return {mesh.x_edges(), pieces};
}

}  // namespace

PiecewisePolynomial compute_density(const DgField& f) {
  const auto& mesh = f.mesh();
  std::vector<std::vector<double>> mom(mesh.np());
  for (std::size_t k = 0; k < mesh.np(); ++k) mom[k] = p_moments(mesh, k, f.degree());
  return x_profile(f, [&](std::size_t k, std::size_t m, int ap, int am) {
    return am == 0 ? mesh.dmu(m) * mom[k][ap] : 0.0;
  });
}

PiecewisePolynomial current(const DgField& f, const BandModel& band) {
  const auto& mesh = f.mesh();
  const int n1 = f.n1();
  const QuadratureRule rule = gauss_legendre(f.degree() + 10);
  std::vector<std::vector<double>> vmom(mesh.np(), std::vector<double>(n1, 0.0));
  for (std::size_t k = 0; k < mesh.np(); ++k) {
    const double lo = mesh.p_edges()[k], h = mesh.dp(k);
    for (int q = 0; q < rule.n; ++q) {
      const double p = lo + 0.5 * h * (rule.nodes[q] + 1.0);
      const auto P = legendre_values(f.degree(), rule.nodes[q]);
      for (int a = 0; a < n1; ++a) vmom[k][a] += 0.5 * h * rule.weights[q] * band.velocity(p) * p * p * P[a];
    }
  }
  return x_profile(f, [&](std::size_t k, std::size_t m, int ap, int am) {
    const double dmu = mesh.dmu(m);
    const double mu_c = 0.5 * (mesh.mu_edges()[m] + mesh.mu_edges()[m + 1]);
    const double mu_mom = am == 0 ? mu_c * dmu : (am == 1 ? dmu * dmu / 6.0 : 0.0);
    return vmom[k][ap] * mu_mom;
  });
}

PotentialSolution solve_dirichlet(const PiecewisePolynomial& rho, const DopingProfile& doping, double phi0, double q,
                                  double epsilon_perm) {
  const double L = rho.breaks().back();
  const double c = q / epsilon_perm;
  const PiecewisePolynomial S = combine(c, doping.N, -c, rho);
  const PiecewisePolynomial I2 = S.antiderivative().antiderivative();
  const double I2L = I2.value_in(I2.pieces() - 1, L);
  PotentialSolution sol;
  sol.bc = PoissonBc::dirichlet;
  sol.phi = I2;
  sol.phi *= -1.0;
  sol.phi.add_global({0.0, (phi0 + I2L) / L});
  sol.E = sol.phi.derivative();
  sol.E *= -1.0;
  sol.imbalance = doping.N.integral() - rho.integral();
  return sol;
}

PotentialSolution solve_periodic(const PiecewisePolynomial& rho, const DopingProfile& doping, double q,
                                 double epsilon_perm, double tol) {
  const double L = rho.breaks().back();
  const double totN = doping.N.integral(), totR = rho.integral();
  const double imbalance = totN - totR;
  const double scale = totN > 0.0 ? totN : std::abs(totR);
  if (std::abs(imbalance) > tol * scale) {
    std::ostringstream os;
    os << "periodic Poisson: net charge " << imbalance << " violates compatibility (tolerance " << tol * scale << ")";
    throw CompatibilityError(os.str(), imbalance);
  }
  const double c = q / epsilon_perm;
  // The admitted residual imbalance is removed so that the solution is exactly periodic.
  PiecewisePolynomial S = combine(c, doping.N, -c, rho);
  S.add_global({-c * imbalance / L});
  const PiecewisePolynomial I2 = S.antiderivative().antiderivative();
  const PiecewisePolynomial I3 = I2.antiderivative();
  const double I2L = I2.value_in(I2.pieces() - 1, L);
  const double I3L = I3.value_in(I3.pieces() - 1, L);
  PotentialSolution sol;
  sol.bc = PoissonBc::periodic;
  sol.imbalance = imbalance;
  sol.phi = I2;
  sol.phi *= -1.0;
  sol.phi.add_global({-0.5 * I2L + I3L / L, I2L / L});
  sol.E = sol.phi.derivative();
  sol.E *= -1.0;
  return sol;
}

PotentialSolution solve_poisson(const PiecewisePolynomial& rho, const DopingProfile& doping, const PoissonParams& prm) {
  if (prm.bc == PoissonBc::dirichlet) return solve_dirichlet(rho, doping, prm.phi0, prm.q, prm.epsilon_perm);
  return solve_periodic(rho, doping, prm.q, prm.epsilon_perm, prm.compat_tol);
}

}  // namespace bpdg
