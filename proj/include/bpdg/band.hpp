#pragma once

namespace bpdg {

enum class BandKind { parabolic, kane };

// Isotropic energy band eps(p) with eps (1 + alpha eps) = p^2 / (2 m*).
// The parabolic band is the alpha = 0 member. Energies are in k_B T units.
class BandModel {
 public:
  BandModel(BandKind kind, double m_star, double alpha_k, double p_max);
  static BandModel parabolic(double m_star, double p_max) { return {BandKind::parabolic, m_star, 0.0, p_max}; }
  static BandModel kane(double m_star, double alpha_k, double p_max) { return {BandKind::kane, m_star, alpha_k, p_max}; }

  BandKind kind() const { return kind_; }
  double m_star() const { return m_; }
  double alpha_k() const { return alpha_; }
  double p_max() const { return p_max_; }
  double eps_max() const { return eps_max_; }

  double energy(double p) const;
  double velocity(double p) const;              // d eps / dp
  double momentum_of_energy(double eps) const;  // inverse of energy()
  double dp_de(double eps) const;               // infinite at eps = 0

  // p^2 dp/deps at energy eps, without the cutoff; finite at eps = 0.
  double state_weight(double eps) const;
  double chi(double eps) const { return (eps >= 0.0 && eps <= eps_max_) ? 1.0 : 0.0; }
  // 4 pi p^2 dp/deps chi(eps)
  double density_of_states(double eps) const;

 private:
  BandKind kind_;
  double m_, alpha_, p_max_, eps_max_;
};

}  // namespace bpdg
