#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "bpdg/band.hpp"

namespace bpdg {

// Transport field of the 1D-position / 2D-momentum problem in (x, p, mu).
struct SphericalBeta {
  BandModel band;
  double q = 1.0;
  std::function<double(double)> E;    // E(x)
  std::function<double(double)> phi;  // Phi(x), E = -Phi'

  using Point = std::array<double, 3>;
  Point beta(const Point& z) const;
  Point grad_H(const Point& z) const;  // H = eps(p) - q Phi(x)
};

// Transport field of the 2D-position / 3D-momentum problem in (x, y, w, mu, phi)
// with w the normalized Kane energy, mu the polar cosine and phi the azimuth.
struct KaneBeta {
  double c_x = 1.0;
  double c_k = 1.0;
  double alpha_k = 0.5;
  std::function<double(double, double)> V;  // potential
  std::function<double(double, double)> E_x, E_y;

  using Point = std::array<double, 5>;
  Point beta(const Point& z) const;    // throws DomainError for |mu| >= 1
  Point grad_H(const Point& z) const;  // H = w - 2 c_k V / c_x
};

// Central-difference divergence with step h.
double divergence_numeric(const SphericalBeta& b, const SphericalBeta::Point& z, double h);
double divergence_numeric(const KaneBeta& b, const KaneBeta::Point& z, double h);
double beta_dot_gradH(const SphericalBeta& b, const SphericalBeta::Point& z);
double beta_dot_gradH(const KaneBeta& b, const KaneBeta::Point& z);

struct BetaReport {
  std::string family;
  int points = 0;
  double max_div = 0.0;        // max |div beta|
  double max_beta = 0.0;       // max |beta_i| over the cloud
  double max_orth_rel = 0.0;   // max |beta . dH| / (|beta| |dH|)
  double seconds = 0.0;
  bool pass = false;
};

// Default fields used by the verification suites (smooth, nonzero potentials).
SphericalBeta default_spherical_beta(const BandModel& band, double q = 1.0);
KaneBeta default_kane_beta(double c_x = 1.0, double c_k = 0.7, double alpha_k = 0.5);

BetaReport verify_spherical(const SphericalBeta& b, int points, std::uint64_t seed, double h = 1e-4);
BetaReport verify_kane(const KaneBeta& b, int points, std::uint64_t seed, double h = 1e-4);

}  // namespace bpdg
