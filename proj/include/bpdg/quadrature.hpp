#pragma once

#include <utility>
#include <vector>

namespace bpdg {

enum class QuadratureKind { gauss_legendre, gauss_lobatto };

// Nodes and weights on the reference interval [-1, 1]; weights sum to 2.
struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::gauss_legendre;
  int n = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  // Highest polynomial degree integrated exactly.
  int exactness() const { return kind == QuadratureKind::gauss_legendre ? 2 * n - 1 : 2 * n - 3; }
};

QuadratureRule quadrature(QuadratureKind kind, int n);
inline QuadratureRule gauss_legendre(int n) { return quadrature(QuadratureKind::gauss_legendre, n); }
inline QuadratureRule gauss_lobatto(int n) { return quadrature(QuadratureKind::gauss_lobatto, n); }

// Legendre polynomial P_n and its derivative at x.
std::pair<double, double> legendre_with_derivative(int n, double x);
inline double legendre(int n, double x) { return legendre_with_derivative(n, x).first; }

// Composite Gauss rule on [a, b] with `panels` equal panels of n points each.
template <class F>
double integrate(const F& f, double a, double b, int n = 12, int panels = 16) {
  const QuadratureRule rule = gauss_legendre(n);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int j = 0; j < panels; ++j) {
    const double mid = a + (j + 0.5) * h;
    for (int q = 0; q < n; ++q) sum += rule.weights[q] * f(mid + 0.5 * h * rule.nodes[q]);
  }
  return 0.5 * h * sum;
}

}  // namespace bpdg
