#pragma once

#include <fstream>
#include <string>

#include "bpdg/spatial_operator.hpp"

namespace bpdg {

// Gauss points per direction for the e^H-weighted integrals.
int entropy_quad_points(int degree);

// int f^2 e^H p^2 dp dmu dx with H = eps(p) - q Phi(x).
double entropy_norm(const DgField& f, const PotentialSolution& pot, const BandModel& band, double q);

// (1/4) sum over distinct faces of int (f+ - f-)^2 |beta.n| e^H. The upwind transport
// term alone dissipates twice this. The p = p_max face counts with a zero exterior
// trace; x boundary faces are included only for periodic x.
double jump_dissipation(const DgField& f, const PotentialSolution& pot, const BandModel& band, double q,
                        XBoundary xbc);

struct EntropyCheck {
  bool skipped = false;
  double lhs = 0.0;    // int (transport + collision rate) f e^H p^2
  double rhs = 0.0;    // -jump_dissipation
  double scale = 0.0;  // sum_c |f_c . R_c| + jump
  bool holds = false;
};
// Evaluated with the e^H-tested operators at the current potential. Skipped for
// non-periodic x.
EntropyCheck semi_discrete_entropy_check(const DgField& f, const PotentialSolution& pot, const ModelSetup& setup);

// Sum over (p, mu) of the e^H-tested collision residual against f, and a scale.
std::pair<double, double> collision_dissipation(const DgField& f, const CollisionOperator& coll_entropy,
                                                const XSamples& xs);

// Range of a piecewise polynomial over its domain.
std::pair<double, double> value_range(const PiecewisePolynomial& u);

struct DiagnosticsRow {
  double t = 0.0, dt = 0.0;
  std::string binding;
  double mass = 0.0, entropy_norm = 0.0, jump_dissipation = 0.0;
  double J_min = 0.0, J_max = 0.0;
  double min_control_value = 0.0;
  std::size_t limiter_count = 0;
  double chi_mass_leak = 0.0;
};

class DiagnosticsCsv {
 public:
  explicit DiagnosticsCsv(const std::string& path);
  void write(const DiagnosticsRow& r);
  static std::string header();
  static std::string format(const DiagnosticsRow& r);

 private:
  std::ofstream out_;
};

// One line per cell: i,k,m,cell_average,coefficients...; the header carries the mesh,
// degree, band and config hash.
void write_snapshot(const std::string& path, const DgField& f, const BandModel& band, double t,
                    const std::string& config_hash);

}  // namespace bpdg
