#include "bpdg/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bpdg {

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breaks, std::vector<std::vector<double>> coeffs)
    : breaks_(std::move(breaks)), coeffs_(std::move(coeffs)) {
  if (breaks_.size() != coeffs_.size() + 1) throw std::invalid_argument("piecewise polynomial: size mismatch");
  for (auto& c : coeffs_)
    if (c.empty()) c.push_back(0.0);
}

PiecewisePolynomial PiecewisePolynomial::constant(std::vector<double> breaks, double value) {
  const std::size_t n = breaks.size() - 1;
  return {std::move(breaks), std::vector<std::vector<double>>(n, std::vector<double>{value})};
}

int PiecewisePolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& c : coeffs_) d = std::max(d, c.size());
  return static_cast<int>(d) - 1;
}

std::size_t PiecewisePolynomial::locate(double x) const {
  auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, x);
  return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

double PiecewisePolynomial::value_in(std::size_t j, double x) const {
  const double s = x - breaks_[j];
  const auto& c = coeffs_[j];
  double v = 0.0;
  for (std::size_t a = c.size(); a-- > 0;) v = v * s + c[a];
  return v;
}

double PiecewisePolynomial::value(double x) const { return value_in(locate(x), x); }

PiecewisePolynomial PiecewisePolynomial::derivative() const {
  std::vector<std::vector<double>> d(coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const auto& c = coeffs_[j];
    for (std::size_t a = 1; a < c.size(); ++a) d[j].push_back(a * c[a]);
  }
  return {breaks_, d};
}

PiecewisePolynomial PiecewisePolynomial::antiderivative() const {
  std::vector<std::vector<double>> A(coeffs_.size());
  double running = 0.0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const auto& c = coeffs_[j];
    A[j].assign(c.size() + 1, 0.0);
    A[j][0] = running;
    for (std::size_t a = 0; a < c.size(); ++a) A[j][a + 1] = c[a] / (a + 1);
    const double h = breaks_[j + 1] - breaks_[j];
    double v = 0.0;
    for (std::size_t a = A[j].size(); a-- > 0;) v = v * h + A[j][a];
    running = v;
  }
  return {breaks_, A};
}

double PiecewisePolynomial::integral() const {
  const auto A = antiderivative();
  return A.value_in(A.pieces() - 1, breaks_.back());
}

double PiecewisePolynomial::integral(double a, double b) const {
  const auto A = antiderivative();
  return A.value(b) - A.value(a);
}

std::vector<double> taylor_shift(const std::vector<double>& c, double d) {
  // Horner in polynomial arithmetic: p(s + d).
  std::vector<double> r(c.size(), 0.0);
  for (std::size_t a = c.size(); a-- > 0;) {
    // r <- r * (s + d) + c[a]
    for (std::size_t b = r.size() - 1; b > 0; --b) r[b] = r[b] * d + r[b - 1];
    r[0] = r[0] * d + c[a];
  }
  return r;
}

PiecewisePolynomial PiecewisePolynomial::refined(const std::vector<double>& breaks) const {
  std::vector<std::vector<double>> c(breaks.size() - 1);
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    const double mid = 0.5 * (breaks[j] + breaks[j + 1]);
    const std::size_t src = locate(mid);
    c[j] = taylor_shift(coeffs_[src], breaks[j] - breaks_[src]);
  }
  return {breaks, c};
}

PiecewisePolynomial& PiecewisePolynomial::operator*=(double a) {
  for (auto& c : coeffs_)
    for (double& v : c) v *= a;
  return *this;
}

PiecewisePolynomial& PiecewisePolynomial::add_global(const std::vector<double>& poly) {
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const auto local = taylor_shift(poly, breaks_[j]);
    auto& c = coeffs_[j];
    if (c.size() < local.size()) c.resize(local.size(), 0.0);
    for (std::size_t a = 0; a < local.size(); ++a) c[a] += local[a];
  }
  return *this;
}

double PiecewisePolynomial::max_abs_on(std::size_t j) const {
  const double a = breaks_[j], b = breaks_[j + 1];
  constexpr int samples = 32;
  double best = 0.0;
  for (int q = 0; q <= samples; ++q) best = std::max(best, std::abs(value_in(j, a + (b - a) * q / samples)));
  // Stationary points: roots of the derivative when it is at most quadratic.
  const auto& c = coeffs_[j];
  std::vector<double> roots;
  if (c.size() == 3 && c[2] != 0.0) roots.push_back(-c[1] / (2 * c[2]));
  if (c.size() == 4) {
    const double A = 3 * c[3], B = 2 * c[2], C = c[1];
    if (A != 0.0) {
      const double disc = B * B - 4 * A * C;
      if (disc >= 0) {
        roots.push_back((-B + std::sqrt(disc)) / (2 * A));
        roots.push_back((-B - std::sqrt(disc)) / (2 * A));
      }
    } else if (B != 0.0) {
      roots.push_back(-C / B);
    }
  }
  for (double s : roots)
    if (s >= 0.0 && s <= b - a) best = std::max(best, std::abs(value_in(j, a + s)));
  return best;
}

double PiecewisePolynomial::max_abs() const {
  double m = 0.0;
  for (std::size_t j = 0; j < pieces(); ++j) m = std::max(m, max_abs_on(j));
  return m;
}

PiecewisePolynomial combine(double a, const PiecewisePolynomial& u, double b, const PiecewisePolynomial& v) {
  std::vector<double> br = u.breaks();
  br.insert(br.end(), v.breaks().begin(), v.breaks().end());
  std::sort(br.begin(), br.end());
  // Merge breakpoints closer than a relative 1e-13.
  const double scale = std::max(std::abs(br.front()), std::abs(br.back()));
  std::vector<double> merged;
  for (double x : br)
    if (merged.empty() || x - merged.back() > 1e-13 * scale) merged.push_back(x);
  merged.back() = std::max(u.breaks().back(), v.breaks().back());
  const auto U = u.refined(merged), V = v.refined(merged);
  std::vector<std::vector<double>> c(merged.size() - 1);
  for (std::size_t j = 0; j < c.size(); ++j) {
    const auto& cu = U.piece(j);
    const auto& cv = V.piece(j);
    c[j].assign(std::max(cu.size(), cv.size()), 0.0);
    for (std::size_t q = 0; q < cu.size(); ++q) c[j][q] += a * cu[q];
    for (std::size_t q = 0; q < cv.size(); ++q) c[j][q] += b * cv[q];
  }
  return {merged, c};
}

std::vector<double> legendre_to_monomial(const std::vector<double>& c, double h) {
  const std::size_t n = c.size();
  std::vector<double> out(n, 0.0);
  // Polynomials of t = 2 s / h - 1 in s, built by the three-term recurrence.
  std::vector<double> t = {-1.0, 2.0 / h};
  std::vector<double> pm{1.0}, pc = t;
  out[0] += c[0];
  if (n > 1)
    for (std::size_t q = 0; q < pc.size(); ++q) out[q] += c[1] * pc[q];
  for (std::size_t a = 2; a < n; ++a) {
    std::vector<double> next(a + 1, 0.0);
    for (std::size_t q = 0; q < pc.size(); ++q) {
      next[q] += (2.0 * a - 1) / a * pc[q] * t[0];
      next[q + 1] += (2.0 * a - 1) / a * pc[q] * t[1];
    }
    for (std::size_t q = 0; q < pm.size(); ++q) next[q] -= (a - 1.0) / a * pm[q];
    pm = pc;
    pc = next;
    for (std::size_t q = 0; q < pc.size(); ++q) out[q] += c[a] * pc[q];
  }
  return out;
}

}  // namespace bpdg
