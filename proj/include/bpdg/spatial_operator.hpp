#pragma once

#include <memory>
#include <optional>

#include "bpdg/collision.hpp"
#include "bpdg/poisson.hpp"
#include "bpdg/transport.hpp"

namespace bpdg {

struct ModelSetup {
  std::shared_ptr<const TensorMesh> mesh;
  int degree = 1;
  BandModel band = BandModel::parabolic(1.0, 1.0);
  ScatteringParams scattering;
  PoissonParams poisson;
  DopingProfile doping;
  BoundarySpec boundary;
  Formulation formulation = Formulation::standard;
  bool frozen = false;  // keep the potential computed from the initial field
};

// Semi-discrete right-hand side M(Phi) df/dt = R_T(f, Phi) + R_C(f, Phi).
class SpatialOperator {
 public:
  explicit SpatialOperator(ModelSetup setup);

  // Potential for field f: a fresh Poisson solve, or the frozen one.
  PotentialSolution potential(const DgField& f) const;
  void freeze(PotentialSolution pot) { frozen_ = std::move(pot); }
  bool frozen() const { return frozen_.has_value(); }

  // Tested residuals, before the mass solve.
  void residuals(const DgField& f, const PotentialSolution& pot, DgField& RT, DgField& RC,
                 const WorkerPool* pool = nullptr) const;
  // Coefficient time derivative.
  void rhs(const DgField& f, const PotentialSolution& pot, DgField& out, const WorkerPool* pool = nullptr) const;
  TensorMass mass(const PotentialSolution& pot) const;

  const ModelSetup& setup() const { return setup_; }
  const TransportOperator& transport() const { return transport_; }
  const CollisionOperator& collision() const { return collision_; }
  const TensorMesh& mesh() const { return *setup_.mesh; }

 private:
  ModelSetup setup_;
  TransportOperator transport_;
  CollisionOperator collision_;
  std::optional<PotentialSolution> frozen_;
  TensorMass standard_mass_;
};

}  // namespace bpdg
