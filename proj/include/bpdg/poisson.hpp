#pragma once

#include "bpdg/band.hpp"
#include "bpdg/dg_field.hpp"
#include "bpdg/piecewise_poly.hpp"

namespace bpdg {

enum class PoissonBc { dirichlet, periodic };

struct DopingProfile {
  PiecewisePolynomial N;

  static DopingProfile uniform(double L, double level);
  // n_plus on [0, a) and (b, L], n on [a, b].
  static DopingProfile nplus_n_nplus(double L, double n_plus, double n, double a, double b);
};

struct PoissonParams {
  PoissonBc bc = PoissonBc::periodic;
  double phi0 = 0.0;          // Phi(L) for the Dirichlet problem, Phi(0) = 0
  double q = 1.0;             // charge
  double epsilon_perm = 1.0;  // permittivity
  double compat_tol = 1e-10;  // relative tolerance on the periodic net charge
};

struct PotentialSolution {
  PiecewisePolynomial phi;
  PiecewisePolynomial E;  // -phi'
  PoissonBc bc = PoissonBc::periodic;
  double imbalance = 0.0;  // integral of (N - rho) seen by the solver

  static PotentialSolution zero(double L);
  double phi_at(double x) const { return phi.value(x); }
  double E_at(double x) const { return E.value(x); }
};

// rho(x) = 2 pi int int f p^2 dp dmu, a degree-k polynomial on each x-cell.
PiecewisePolynomial compute_density(const DgField& f);
// J(x) = 2 pi int int v(p) mu f p^2 dp dmu.
PiecewisePolynomial current(const DgField& f, const BandModel& band);

// -phi'' = (q/eps)(N - rho), phi(0) = 0, phi(L) = phi0.
PotentialSolution solve_dirichlet(const PiecewisePolynomial& rho, const DopingProfile& doping, double phi0,
                                  double q = 1.0, double epsilon_perm = 1.0);
// Periodic problem with zero-average potential; throws CompatibilityError when
// |int (N - rho)| > tol * int N.
PotentialSolution solve_periodic(const PiecewisePolynomial& rho, const DopingProfile& doping, double q = 1.0,
                                 double epsilon_perm = 1.0, double tol = 1e-10);
PotentialSolution solve_poisson(const PiecewisePolynomial& rho, const DopingProfile& doping, const PoissonParams& prm);

}  // namespace bpdg
