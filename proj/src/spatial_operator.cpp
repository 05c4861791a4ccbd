#include "bpdg/spatial_operator.hpp"

#include <cmath>

#include "bpdg/error.hpp"

namespace bpdg {

SpatialOperator::SpatialOperator(ModelSetup setup)
    : setup_(std::move(setup)),
      transport_(setup_.mesh, setup_.degree, setup_.band, setup_.poisson.q, setup_.boundary, setup_.formulation),
      collision_(setup_.mesh, setup_.degree, setup_.band, setup_.scattering, setup_.formulation),
      standard_mass_(TensorMass::standard(*setup_.mesh, setup_.degree)) {
  if (setup_.band.p_max() != setup_.mesh->p_max()) throw ConfigError("band and mesh disagree on p_max");
}

PotentialSolution SpatialOperator::potential(const DgField& f) const {
  if (frozen_) return *frozen_;
  return solve_poisson(compute_density(f), setup_.doping, setup_.poisson);
}

TensorMass SpatialOperator::mass(const PotentialSolution& pot) const {
  if (setup_.formulation == Formulation::standard) return standard_mass_;
  const double q = setup_.poisson.q;
  const BandModel& band = setup_.band;
  return TensorMass::weighted(
      mesh(), setup_.degree, [&](double x) { return std::exp(-q * pot.phi_at(x)); },
      [&](double p) { return std::exp(band.energy(p)); }, transport_.quad_points());
}

void SpatialOperator::residuals(const DgField& f, const PotentialSolution& pot, DgField& RT, DgField& RC,
                                const WorkerPool* pool) const {
  const XSamples xs = transport_.sample_potential(pot);
  transport_.residual(f, xs, RT, pool);
  if (collision_.x_rule().n == xs.nq)
    collision_.residual(f, xs, RC, false, pool);
  else
    collision_.residual(f, pot, setup_.poisson.q, RC, false, pool);
}

void SpatialOperator::rhs(const DgField& f, const PotentialSolution& pot, DgField& out, const WorkerPool* pool) const {
  DgField RC;
  residuals(f, pot, out, RC, pool);
  out.axpy(1.0, RC);
  mass(pot).solve(out);
  for (double v : out.data())
    if (!std::isfinite(v)) throw StepFailure("non-finite right-hand side");
}

}  // namespace bpdg
