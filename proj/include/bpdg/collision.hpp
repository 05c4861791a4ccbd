#pragma once

#include <array>
#include <memory>
#include <vector>

#include "bpdg/band.hpp"
#include "bpdg/dg_field.hpp"
#include "bpdg/parallel.hpp"
#include "bpdg/transport.hpp"

namespace bpdg {

// Electron-phonon constants. Coefficients c_j for j = -1, 0, +1:
// c_{+1} = (n_ph + 1) K (emission), c_{-1} = n_ph K (absorption), c_0 elastic.
struct ScatteringParams {
  double K = 0.0;
  double n_ph = 0.0;
  double hbar_omega = 0.0;
  double c0 = 0.0;

  static ScatteringParams thermal(double K, double hbar_omega, double c0 = 0.0);
  // Direct coefficients, bypassing (K, n_ph); used for synthetic kernels.
  static ScatteringParams explicit_coefficients(double c_minus, double c_zero, double c_plus, double hbar_omega);

  double c(int j) const { return coeff_override ? coeffs[j + 1] : (j == 1 ? (n_ph + 1.0) * K : j == -1 ? n_ph * K : c0); }
  void validate() const;

  bool coeff_override = false;
  std::array<double, 3> coeffs{};
};

// nu(p) = sum_j c_j n(eps(p) - j hbar_omega)
double collision_frequency(const BandModel& band, const ScatteringParams& prm, double p);

struct ShiftEntry {
  double eps = 0.0;      // eps_r + j hbar_omega
  bool inside = false;   // chi
  double p = 0.0;        // shifted momentum
  std::size_t cell = 0;  // owning p-cell
  double xi = 0.0;       // local coordinate in that cell
  double weight = 0.0;   // p'^2 dp/deps at the shifted energy
};

// Shifted gain sites for every p-quadrature node.
struct EnergyShiftTable {
  int nq = 0;
  std::vector<double> p;                     // node momenta, np * nq
  std::vector<std::array<ShiftEntry, 3>> e;  // e[node][j + 1]
};

EnergyShiftTable build_shift_table(const TensorMesh& mesh, const BandModel& band, const ScatteringParams& prm,
                                   const QuadratureRule& p_rule);

// A node of the transition quadrature: a pair of momenta (lo, hi) with
// eps(hi) = eps(lo) + hbar_omega and measure dm = p_lo^2 w(eps_hi) dp_lo.
struct TransitionNode {
  std::size_t k_lo = 0, k_hi = 0;
  double xi_lo = 0.0, xi_hi = 0.0;
  double p_lo = 0.0, p_hi = 0.0;
  double eps_lo = 0.0, eps_hi = 0.0;
  double dm = 0.0;
  std::array<double, 5> P_lo{}, P_hi{};  // Legendre values at xi_lo, xi_hi
};

class CollisionOperator {
 public:
  CollisionOperator(std::shared_ptr<const TensorMesh> mesh, int degree, BandModel band, ScatteringParams prm,
                    Formulation form = Formulation::standard, int x_points = 0, int pair_points = 6);

  // R_a = (Q(f), test_a) with test_a = phi_a or phi_a e^H.
  void residual(const DgField& f, const XSamples& xs, DgField& R, bool accumulate,
                const WorkerPool* pool = nullptr) const;
  void residual(const DgField& f, const PotentialSolution& pot, double q, DgField& R, bool accumulate,
                const WorkerPool* pool = nullptr) const;

  // Pointwise operator Q(f) = gain - nu f, with the gain read from the shift table.
  double mu_integral(const DgField& f, std::size_t i, double xi_x, double p) const;
  double gain(const DgField& f, std::size_t i, double xi_x, double p) const;
  double pointwise(const DgField& f, std::size_t i, std::size_t k, std::size_t m, double xi_x, double xi_p,
                   double xi_mu) const;
  double frequency(double p) const { return collision_frequency(band_, prm_, p); }
  // Max of nu over the p-quadrature nodes and transition nodes.
  double nu_max() const { return nu_max_; }

  const EnergyShiftTable& shift_table() const { return table_; }
  const std::vector<TransitionNode>& transitions() const { return pairs_; }
  const std::vector<TransitionNode>& elastic_nodes() const { return elastic_; }
  const ScatteringParams& params() const { return prm_; }
  const BandModel& band() const { return band_; }
  const QuadratureRule& x_rule() const { return x_rule_; }
  bool active() const { return prm_.c(-1) > 0.0 || prm_.c(0) > 0.0 || prm_.c(1) > 0.0; }

 private:
  void build_transitions(int pair_points);

  std::shared_ptr<const TensorMesh> mesh_;
  int degree_;
  BandModel band_;
  ScatteringParams prm_;
  Formulation form_;
  QuadratureRule x_rule_, p_rule_;
  BasisTable x_table_;
  EnergyShiftTable table_;
  std::vector<TransitionNode> pairs_, elastic_;
  double nu_max_ = 0.0;
};

}  // namespace bpdg
