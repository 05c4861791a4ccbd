#include "bpdg/band.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bpdg/error.hpp"

namespace bpdg {

BandModel::BandModel(BandKind kind, double m_star, double alpha_k, double p_max)
    : kind_(kind), m_(m_star), alpha_(kind == BandKind::parabolic ? 0.0 : alpha_k), p_max_(p_max) {
  if (!(m_star > 0.0)) throw ConfigError("band: m_star must be > 0");
  if (!(alpha_k >= 0.0)) throw ConfigError("band: alpha_k must be >= 0");
  if (!(p_max > 0.0)) throw ConfigError("band: p_max must be > 0");
  eps_max_ = energy(p_max);
}

// eps = 2g / (1 + sqrt(1 + 4 alpha g)) with g = p^2/(2m): the quadratic root
// written without cancellation, valid down to alpha = 0.
double BandModel::energy(double p) const {
  if (p < 0.0) throw DomainError("energy: negative momentum " + std::to_string(p));
  const double g = p * p / (2.0 * m_);
  return 2.0 * g / (1.0 + std::sqrt(1.0 + 4.0 * alpha_ * g));
}

double BandModel::velocity(double p) const {
  if (p < 0.0) throw DomainError("velocity: negative momentum " + std::to_string(p));
  return p / (m_ * (1.0 + 2.0 * alpha_ * energy(p)));
}

double BandModel::momentum_of_energy(double eps) const {
  if (eps < 0.0) throw DomainError("momentum_of_energy: negative energy " + std::to_string(eps));
  return std::sqrt(2.0 * m_ * eps * (1.0 + alpha_ * eps));
}

double BandModel::dp_de(double eps) const {
  if (eps < 0.0) throw DomainError("dp_de: negative energy " + std::to_string(eps));
  const double p = momentum_of_energy(eps);
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  return m_ * (1.0 + 2.0 * alpha_ * eps) / p;
}

double BandModel::state_weight(double eps) const {
  if (eps < 0.0) return 0.0;
  return m_ * momentum_of_energy(eps) * (1.0 + 2.0 * alpha_ * eps);
}

double BandModel::density_of_states(double eps) const {
  if (chi(eps) == 0.0) return 0.0;
  return 4.0 * std::numbers::pi * state_weight(eps);
}

}  // namespace bpdg
