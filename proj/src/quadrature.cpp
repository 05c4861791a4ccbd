#include "bpdg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bpdg/error.hpp"

namespace bpdg {

std::pair<double, double> legendre_with_derivative(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = x;
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  // P'_n from the three-term identity; the endpoint form avoids 0/0.
  double dp;
  if (std::abs(x) == 1.0)
    dp = 0.5 * n * (n + 1) * (x > 0 ? 1.0 : (n % 2 ? 1.0 : -1.0));
  else
    dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

namespace {

constexpr double newton_tol = 1e-15;
constexpr int newton_max_iter = 100;

QuadratureRule build_legendre(int n) {
  QuadratureRule rule{QuadratureKind::gauss_legendre, n, std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < newton_max_iter; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < newton_tol) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// Interior nodes are the roots of P'_{n-1}; Newton uses
// (1 - x^2) P'' = 2x P' - m(m+1) P with m = n - 1.
QuadratureRule build_lobatto(int n) {
  const int m = n - 1;
  QuadratureRule rule{QuadratureKind::gauss_lobatto, n, std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * i / m);
    if (i > 0 && i < m) {
      for (int it = 0; it < newton_max_iter; ++it) {
        const auto [p, dp] = legendre_with_derivative(m, x);
        const double d2p = (2.0 * x * dp - m * (m + 1) * p) / (1.0 - x * x);
        const double dx = dp / d2p;
        x -= dx;
        if (std::abs(dx) < newton_tol) break;
      }
    }
    const double p = legendre(m, x);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / (m * n * p * p);
  }
  return rule;
}

}  // namespace

QuadratureRule quadrature(QuadratureKind kind, int n) {
  if (kind == QuadratureKind::gauss_legendre && n < 1)
    throw ConfigError("gauss-legendre rule needs n >= 1, got " + std::to_string(n));
  if (kind == QuadratureKind::gauss_lobatto && n < 2)
    throw ConfigError("gauss-lobatto rule needs n >= 2, got " + std::to_string(n));
  if (n > 64) throw ConfigError("quadrature order " + std::to_string(n) + " not supported (max 64)");

  QuadratureRule rule = kind == QuadratureKind::gauss_legendre ? build_legendre(n) : build_lobatto(n);

  // Sort ascending and symmetrize so mirrored nodes agree to the last bit.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return rule.nodes[a] < rule.nodes[b]; });
  QuadratureRule sorted = rule;
  for (int i = 0; i < n; ++i) {
    sorted.nodes[i] = rule.nodes[order[i]];
    sorted.weights[i] = rule.weights[order[i]];
  }
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (sorted.nodes[j] - sorted.nodes[i]);
    const double w = 0.5 * (sorted.weights[i] + sorted.weights[j]);
    sorted.nodes[i] = -x;
    sorted.nodes[j] = x;
    sorted.weights[i] = sorted.weights[j] = w;
  }
  if (n % 2) sorted.nodes[n / 2] = 0.0;
  if (kind == QuadratureKind::gauss_lobatto) {
    sorted.nodes.front() = -1.0;
    sorted.nodes.back() = 1.0;
  }
  return sorted;
}

}  // namespace bpdg
