#pragma once

#include <cstddef>
#include <vector>

namespace bpdg {

// Piecewise polynomial on [b_0, b_n]. Piece j holds monomial coefficients in
// the local variable s = x - b_j.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  PiecewisePolynomial(std::vector<double> breaks, std::vector<std::vector<double>> coeffs);
  static PiecewisePolynomial constant(std::vector<double> breaks, double value);

  const std::vector<double>& breaks() const { return breaks_; }
  std::size_t pieces() const { return coeffs_.size(); }
  const std::vector<double>& piece(std::size_t j) const { return coeffs_[j]; }
  int degree() const;

  std::size_t locate(double x) const;
  double value(double x) const;
  double value_in(std::size_t j, double x) const;  // evaluate piece j at x
  double integral() const;
  double integral(double a, double b) const;

  PiecewisePolynomial derivative() const;
  // Continuous antiderivative vanishing at b_0.
  PiecewisePolynomial antiderivative() const;
  // Re-express on a finer breakpoint set that contains the current one.
  PiecewisePolynomial refined(const std::vector<double>& breaks) const;

  PiecewisePolynomial& operator*=(double a);
  // Add a polynomial in the global variable x (monomial coefficients in x).
  PiecewisePolynomial& add_global(const std::vector<double>& poly_in_x);

  // Max |value| over piece j, sampled at `samples` points plus stationary points of degree <= 3.
  double max_abs_on(std::size_t j) const;
  double max_abs() const;

 private:
  std::vector<double> breaks_;
  std::vector<std::vector<double>> coeffs_;
};

// a * u + b * v on the union of both breakpoint sets.
PiecewisePolynomial combine(double a, const PiecewisePolynomial& u, double b, const PiecewisePolynomial& v);

// Coefficients of p(s + d) given those of p(s).
std::vector<double> taylor_shift(const std::vector<double>& c, double d);

// Monomial coefficients in s of sum_a c_a P_a(2 s / h - 1), s in [0, h].
std::vector<double> legendre_to_monomial(const std::vector<double>& c, double h);

}  // namespace bpdg
