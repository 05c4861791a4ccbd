#pragma once

#include <memory>
#include <vector>

#include "bpdg/band.hpp"
#include "bpdg/dg_field.hpp"
#include "bpdg/parallel.hpp"
#include "bpdg/poisson.hpp"

namespace bpdg {

// standard: test functions phi, mass matrix weighted by p^2.
// entropy:  test functions phi e^H with H = eps(p) - q Phi(x), mass matrix weighted by e^H p^2.
enum class Formulation { standard, entropy };

enum class XBoundary { periodic, inflow };

struct BoundarySpec {
  XBoundary x = XBoundary::periodic;
  // Contact densities of the inflow Maxwellian ghosts at x = 0 and x = L.
  double left_density = 0.0;
  double right_density = 0.0;
};

// Upwind numerical fluxes. f_minus is the trace on the low side of the face.
double upwind_flux_x(double mu, double eps_prime, double f_minus, double f_plus);
double upwind_flux_p(double E, double mu, double f_minus, double f_plus, double q = 1.0);
double upwind_flux_mu(double E, double f_minus, double f_plus, double q = 1.0);

// Potential and weight samples at the x-quadrature nodes of every x-cell.
struct XSamples {
  int nq = 0;
  std::vector<double> x, E, wx;  // nx * nq
  std::vector<double> wx_edge;   // nx + 1
};

// Tabulated p-direction quantities at the quadrature nodes of every p-cell.
struct PSamples {
  int nq = 0;
  std::vector<double> p, v, wp;  // np * nq
  std::vector<double> wp_edge;   // np + 1
};

class TransportOperator {
 public:
  // nq = 0 picks degree + 2 points per direction (standard) or degree + 5 (entropy).
  TransportOperator(std::shared_ptr<const TensorMesh> mesh, int degree, BandModel band, double q, BoundarySpec bc,
                    Formulation form, int nq = 0);

  // R_a = weak-form transport terms tested against the a-th test function.
  void residual(const DgField& f, const PotentialSolution& pot, DgField& R, const WorkerPool* pool = nullptr) const;
  void residual(const DgField& f, const XSamples& xs, DgField& R, const WorkerPool* pool = nullptr) const;

  // d/dt of the p^2-weighted cell average due to transport.
  double cell_average_increment(const DgField& f, const PotentialSolution& pot, std::size_t i, std::size_t k,
                                std::size_t m) const;

  XSamples sample_potential(const PotentialSolution& pot) const;
  double ghost(double p, bool left) const;

  const TensorMesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int quad_points() const { return rule_.n; }
  const QuadratureRule& rule() const { return rule_; }
  const BasisTable& table() const { return table_; }
  const BandModel& band() const { return band_; }
  double q() const { return q_; }
  Formulation formulation() const { return form_; }
  const BoundarySpec& boundary() const { return bc_; }
  const PSamples& p_samples() const { return ps_; }

 private:
  void cell_residual(const DgField& f, const XSamples& xs, const PSamples& ps, std::size_t i, std::size_t k,
                     std::size_t m, double* R) const;

  std::shared_ptr<const TensorMesh> mesh_;
  int degree_;
  BandModel band_;
  double q_;
  BoundarySpec bc_;
  Formulation form_;
  QuadratureRule rule_;
  BasisTable table_;
  PSamples ps_, ps_unweighted_;
  double maxwell_norm_;  // 4 pi int_0^pmax e^{-eps} p^2 dp
};

}  // namespace bpdg
