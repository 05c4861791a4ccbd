#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "bpdg/mesh.hpp"
#include "bpdg/quadrature.hpp"

namespace bpdg {

// Values and derivatives (in the reference variable) of P_0..P_k at a set of nodes,
// plus the endpoint values P_a(-1), P_a(+1).
struct BasisTable {
  int n1 = 0;  // k + 1
  int nq = 0;
  std::vector<double> val;  // val[q * n1 + a]
  std::vector<double> der;
  std::vector<double> lo, hi;

  double v(int q, int a) const { return val[q * n1 + a]; }
  double d(int q, int a) const { return der[q * n1 + a]; }
};
BasisTable basis_table(int degree, const std::vector<double>& nodes);
std::vector<double> legendre_values(int degree, double xi);

// Modal coefficients of a tensor Legendre expansion, (k+1)^3 per cell.
// Mode (ax, ap, am) is stored at (ax * n1 + ap) * n1 + am.
class DgField {
 public:
  DgField() = default;
  DgField(std::shared_ptr<const TensorMesh> mesh, int degree);

  const TensorMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const TensorMesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int n1() const { return degree_ + 1; }
  int modes() const { return n1() * n1() * n1(); }
  std::size_t cell_count() const { return mesh_ ? mesh_->cell_count() : 0; }

  static int mode(int ax, int ap, int am, int n1) { return (ax * n1 + ap) * n1 + am; }

  double* cell(std::size_t c) { return coeffs_.data() + c * modes(); }
  const double* cell(std::size_t c) const { return coeffs_.data() + c * modes(); }
  std::vector<double>& data() { return coeffs_; }
  const std::vector<double>& data() const { return coeffs_; }

  void set_zero();
  // this += a * other
  void axpy(double a, const DgField& other);
  void scale(double a);

 private:
  std::shared_ptr<const TensorMesh> mesh_;
  int degree_ = 1;
  std::vector<double> coeffs_;
};

// Block-diagonal mass matrix that factors as Mx (x) Mp (x) Mmu on each cell.
// The standard one is the p^2-weighted Gram matrix; weighted variants multiply
// the measure by wx(x) wp(p).
class TensorMass {
 public:
  static TensorMass standard(const TensorMesh& mesh, int degree);
  static TensorMass weighted(const TensorMesh& mesh, int degree, const std::function<double(double)>& wx,
                             const std::function<double(double)>& wp, int nq);

  void apply(std::size_t i, std::size_t k, std::size_t m, const double* in, double* out) const;
  void solve(std::size_t i, std::size_t k, std::size_t m, double* block) const;
  void solve(DgField& f) const;
  // sum_c a_c^T M_c b_c
  double inner(const DgField& a, const DgField& b) const;

 private:
  int n1_ = 0;
  std::size_t nx_ = 0, np_ = 0, nmu_ = 0;
  std::vector<double> mx_, mp_, mm_, ix_, ip_, im_;  // n1*n1 blocks per cell in each direction
};

// y = (A (x) B (x) C) x for n1 x n1 row-major blocks.
void tensor_apply(int n1, const double* A, const double* B, const double* C, const double* x, double* y);

using PhaseFunction = std::function<double(double x, double p, double mu)>;

// p^2-weighted L2 projection; nq Gauss points per direction (0 picks degree + 6).
DgField project(const PhaseFunction& f, std::shared_ptr<const TensorMesh> mesh, int degree, int nq = 0);

double evaluate(const DgField& f, std::size_t i, std::size_t k, std::size_t m, double xi_x, double xi_p,
                double xi_mu);
// Value at a physical point (x, p, mu).
double evaluate_at(const DgField& f, double x, double p, double mu);

// Integral of P_a(xi(p)) p^2 dp over p-cell k, a = 0..degree.
std::vector<double> p_moments(const TensorMesh& mesh, std::size_t k, int degree);

double cell_integral(const DgField& f, std::size_t i, std::size_t k, std::size_t m);
double cell_average(const DgField& f, std::size_t i, std::size_t k, std::size_t m);
std::vector<double> cell_averages(const DgField& f);
double total_mass(const DgField& f);
double weighted_norm2(const DgField& f);

}  // namespace bpdg
