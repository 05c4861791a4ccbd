#include "bpdg/curvilinear.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "bpdg/error.hpp"

namespace bpdg {

SphericalBeta::Point SphericalBeta::beta(const Point& z) const {
  const auto [x, p, mu] = z;
  const double e = E(x);
  return {p * p * mu * band.velocity(p), -q * e * p * p * mu, -q * e * p * (1.0 - mu) * (1.0 + mu)};
}

SphericalBeta::Point SphericalBeta::grad_H(const Point& z) const {
  // d/dx (-q Phi) = q E
  return {q * E(z[0]), band.velocity(z[1]), 0.0};
}

KaneBeta::Point KaneBeta::beta(const Point& z) const {
  const auto [x, y, w, mu, ph] = z;
  if (std::abs(mu) >= 1.0) throw DomainError("Kane transport field is singular at |mu| = 1");
  const double s = std::sqrt((1.0 - mu) * (1.0 + mu));
  const double ex = E_x(x, y), ey = E_y(x, y);
  const double g = w * (1.0 + alpha_k * w);
  const double gp = 1.0 + 2.0 * alpha_k * w;
  return {c_x * g * mu,
          c_x * g * s * std::cos(ph),
          -c_k * 2.0 * g * (mu * ex + s * std::cos(ph) * ey),
          -c_k * s * gp * (s * ex - mu * std::cos(ph) * ey),
          -c_k * (-gp * ey * std::sin(ph)) / s};
}

KaneBeta::Point KaneBeta::grad_H(const Point& z) const {
  const double ex = E_x(z[0], z[1]), ey = E_y(z[0], z[1]);
  return {2.0 * c_k * ex / c_x, 2.0 * c_k * ey / c_x, 1.0, 0.0, 0.0};
}

namespace {

template <class Beta, std::size_t N>
double central_divergence(const Beta& b, const std::array<double, N>& z, double h) {
  double div = 0.0;
  for (std::size_t d = 0; d < N; ++d) {
    auto zp = z, zm = z;
    zp[d] += h;
    zm[d] -= h;
    div += (b.beta(zp)[d] - b.beta(zm)[d]) / (2.0 * h);
  }
  return div;
}

template <std::size_t N>
double dot(const std::array<double, N>& a, const std::array<double, N>& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < N; ++d) s += a[d] * b[d];
  return s;
}

template <std::size_t N>
double norm(const std::array<double, N>& a) {
  return std::sqrt(dot(a, a));
}

template <class Beta, class Sampler>
BetaReport verify(const Beta& b, const char* name, int points, std::uint64_t seed, double h, Sampler sample) {
  const auto t0 = std::chrono::steady_clock::now();
  BetaReport r;
  r.family = name;
  r.points = points;
  std::mt19937_64 rng(seed);
  for (int n = 0; n < points; ++n) {
    const auto z = sample(rng);
    const auto beta = b.beta(z);
    const auto dH = b.grad_H(z);
    for (double v : beta) r.max_beta = std::max(r.max_beta, std::abs(v));
    r.max_div = std::max(r.max_div, std::abs(divergence_numeric(b, z, h)));
    const double scale = norm(beta) * norm(dH);
    if (scale > 0.0) r.max_orth_rel = std::max(r.max_orth_rel, std::abs(beta_dot_gradH(b, z)) / scale);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = r.max_div <= 1e-6 * r.max_beta && r.max_orth_rel <= 1e-12;
  return r;
}

}  // namespace

double divergence_numeric(const SphericalBeta& b, const SphericalBeta::Point& z, double h) {
  if (z[1] - h < 0.0 || std::abs(z[2]) + h > 1.0) throw DomainError("divergence stencil leaves the domain");
  return central_divergence(b, z, h);
}

double divergence_numeric(const KaneBeta& b, const KaneBeta::Point& z, double h) {
  if (z[2] - h < 0.0 || std::abs(z[3]) + 2.0 * h >= 1.0) throw DomainError("divergence stencil too close to a singular locus");
  return central_divergence(b, z, h);
}

double beta_dot_gradH(const SphericalBeta& b, const SphericalBeta::Point& z) { return dot(b.beta(z), b.grad_H(z)); }
double beta_dot_gradH(const KaneBeta& b, const KaneBeta::Point& z) { return dot(b.beta(z), b.grad_H(z)); }

SphericalBeta default_spherical_beta(const BandModel& band, double q) {
  SphericalBeta b{band, q, nullptr, nullptr};
  // Phi = 0.8 sin(2 pi x) + 0.3 x
  constexpr double k = 2.0 * std::numbers::pi;
  b.phi = [](double x) { return 0.8 * std::sin(k * x) + 0.3 * x; };
  b.E = [](double x) { return -(0.8 * k * std::cos(k * x) + 0.3); };
  return b;
}

KaneBeta default_kane_beta(double c_x, double c_k, double alpha_k) {
  KaneBeta b;
  b.c_x = c_x;
  b.c_k = c_k;
  b.alpha_k = alpha_k;
  // V = 0.5 sin(x) cos(2y) + 0.2 x - 0.1 y
  b.V = [](double x, double y) { return 0.5 * std::sin(x) * std::cos(2 * y) + 0.2 * x - 0.1 * y; };
  b.E_x = [](double x, double y) { return -(0.5 * std::cos(x) * std::cos(2 * y) + 0.2); };
  b.E_y = [](double x, double y) { return -(-std::sin(x) * std::sin(2 * y) - 0.1); };
  return b;
}

BetaReport verify_spherical(const SphericalBeta& b, int points, std::uint64_t seed, double h) {
  const double pmax = b.band.p_max();
  return verify(b, "spherical", points, seed, h, [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(0.0, 1.0), up(0.05 * pmax, pmax), umu(-0.95, 0.95);
    const double x = ux(rng), p = up(rng), mu = umu(rng);
    return SphericalBeta::Point{x, p, mu};
  });
}

BetaReport verify_kane(const KaneBeta& b, int points, std::uint64_t seed, double h) {
  return verify(b, "kane", points, seed, h, [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(0.0, 2.0 * std::numbers::pi), uw(0.05, 5.0), umu(-0.9, 0.9),
        uph(0.0, 2.0 * std::numbers::pi);
    const double x = ux(rng), y = ux(rng), w = uw(rng), mu = umu(rng), ph = uph(rng);
    return KaneBeta::Point{x, y, w, mu, ph};
  });
}

}  // namespace bpdg
