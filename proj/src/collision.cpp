#include "bpdg/collision.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bpdg/error.hpp"

namespace bpdg {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double four_pi = 4.0 * std::numbers::pi;
}  // namespace

ScatteringParams ScatteringParams::thermal(double K, double hbar_omega, double c0) {
  ScatteringParams s;
  s.K = K;
  s.hbar_omega = hbar_omega;
  s.c0 = c0;
  s.n_ph = hbar_omega > 0.0 ? 1.0 / std::expm1(hbar_omega) : 0.0;
  return s;
}

ScatteringParams ScatteringParams::explicit_coefficients(double c_minus, double c_zero, double c_plus,
                                                         double hbar_omega) {
  ScatteringParams s;
  s.hbar_omega = hbar_omega;
  s.coeff_override = true;
  s.coeffs = {c_minus, c_zero, c_plus};
  s.c0 = c_zero;
  return s;
}

void ScatteringParams::validate() const {
  std::string err;
  if (!(K >= 0.0)) err += " K must be >= 0;";
  if (!(n_ph >= 0.0)) err += " n_ph must be >= 0;";
  if (!(hbar_omega >= 0.0)) err += " hbar_omega must be >= 0;";
  if (!(c0 >= 0.0)) err += " c0 must be >= 0;";
  for (int j = -1; j <= 1; ++j)
    if (!(c(j) >= 0.0)) err += " coefficients must be >= 0;";
  if (!err.empty()) throw ConfigError("scattering:" + err);
}

double collision_frequency(const BandModel& band, const ScatteringParams& prm, double p) {
  const double eps = band.energy(p);
  double nu = 0.0;
  for (int j = -1; j <= 1; ++j) {
    const double c = prm.c(j);
    if (c != 0.0) nu += c * band.density_of_states(eps - j * prm.hbar_omega);
  }
  return nu;
}

namespace {

// Local coordinate of p in p-cell k, clamped to the reference interval.
double local_coord(const TensorMesh& mesh, std::size_t k, double p) {
  const double xi = 2.0 * (p - mesh.p_edges()[k]) / mesh.dp(k) - 1.0;
  return std::clamp(xi, -1.0, 1.0);
}

}  // namespace

EnergyShiftTable build_shift_table(const TensorMesh& mesh, const BandModel& band, const ScatteringParams& prm,
                                   const QuadratureRule& p_rule) {
  EnergyShiftTable t;
  t.nq = p_rule.n;
  const std::size_t np = mesh.np();
  t.p.resize(np * p_rule.n);
  t.e.resize(np * p_rule.n);
  for (std::size_t k = 0; k < np; ++k)
    for (int r = 0; r < p_rule.n; ++r) {
      const std::size_t node = k * p_rule.n + r;
      const double p = mesh.p_edges()[k] + 0.5 * mesh.dp(k) * (p_rule.nodes[r] + 1.0);
      const double eps = band.energy(p);
      t.p[node] = p;
      for (int j = -1; j <= 1; ++j) {
        ShiftEntry& s = t.e[node][j + 1];
        s.eps = eps + j * prm.hbar_omega;
        s.inside = band.chi(s.eps) == 1.0;
        if (!s.inside) continue;
        s.p = j == 0 ? p : std::min(band.momentum_of_energy(s.eps), mesh.p_max());
        s.cell = j == 0 ? k : mesh.locate_p(s.p);
        s.xi = j == 0 ? p_rule.nodes[r] : local_coord(mesh, s.cell, s.p);
        s.weight = band.state_weight(s.eps);
      }
    }
  return t;
}

CollisionOperator::CollisionOperator(std::shared_ptr<const TensorMesh> mesh, int degree, BandModel band,
                                     ScatteringParams prm, Formulation form, int x_points, int pair_points)
    : mesh_(std::move(mesh)), degree_(degree), band_(band), prm_(prm), form_(form) {
  prm_.validate();
  if (x_points <= 0) x_points = form == Formulation::entropy ? degree + 5 : degree + 2;
  x_rule_ = gauss_legendre(x_points);
  p_rule_ = gauss_legendre(x_points);
  x_table_ = basis_table(degree, x_rule_.nodes);
  table_ = build_shift_table(*mesh_, band_, prm_, p_rule_);
  build_transitions(pair_points);
  for (double p : table_.p) nu_max_ = std::max(nu_max_, frequency(p));
  for (const auto& n : pairs_) nu_max_ = std::max({nu_max_, frequency(n.p_lo), frequency(n.p_hi)});
  for (const auto& n : elastic_) nu_max_ = std::max(nu_max_, frequency(n.p_lo));
}

void CollisionOperator::build_transitions(int pair_points) {
  const TensorMesh& mesh = *mesh_;
  const QuadratureRule rule = gauss_legendre(pair_points);
  const double hw = prm_.hbar_omega, eps_max = band_.eps_max();
  const auto fill = [&](TransitionNode& n) {
    const auto a = legendre_values(degree_, n.xi_lo), b = legendre_values(degree_, n.xi_hi);
    std::copy(a.begin(), a.end(), n.P_lo.begin());
    std::copy(b.begin(), b.end(), n.P_hi.begin());
  };

  for (std::size_t k = 0; k < mesh.np(); ++k)
    for (int q = 0; q < rule.n; ++q) {
      TransitionNode n;
      n.k_lo = n.k_hi = k;
      n.xi_lo = n.xi_hi = rule.nodes[q];
      n.p_lo = n.p_hi = mesh.p_edges()[k] + 0.5 * mesh.dp(k) * (rule.nodes[q] + 1.0);
      n.eps_lo = n.eps_hi = band_.energy(n.p_lo);
      n.dm = n.p_lo * n.p_lo * band_.state_weight(n.eps_lo) * 0.5 * mesh.dp(k) * rule.weights[q];
      fill(n);
      elastic_.push_back(n);
    }

  if (eps_max < hw) return;
  // Split the lower momentum range at the p-edges and at the preimages of the
  // p-edges under eps -> eps + hbar_omega, so both ends stay inside one cell.
  const double lo_max = std::min(band_.momentum_of_energy(eps_max - hw), mesh.p_max());
  std::vector<double> br{0.0, lo_max};
  for (double e : mesh.p_edges()) {
    if (e < lo_max) br.push_back(e);
    const double ee = band_.energy(e);
    if (ee >= hw) {
      const double pre = band_.momentum_of_energy(ee - hw);
      if (pre < lo_max) br.push_back(pre);
    }
  }
  std::sort(br.begin(), br.end());
  std::vector<double> cuts;
  for (double b : br)
    if (cuts.empty() || b - cuts.back() > 1e-12 * mesh.p_max()) cuts.push_back(b);
  cuts.back() = std::max(cuts.back(), lo_max);

  const auto hi_of = [&](double p) { return std::min(band_.momentum_of_energy(band_.energy(p) + hw), mesh.p_max()); };
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1], mid = 0.5 * (a + b);
    const std::size_t k_lo = mesh.locate_p(mid), k_hi = mesh.locate_p(hi_of(mid));
    for (int q = 0; q < rule.n; ++q) {
      TransitionNode n;
      n.k_lo = k_lo;
      n.k_hi = k_hi;
      n.p_lo = mid + 0.5 * (b - a) * rule.nodes[q];
      n.eps_lo = band_.energy(n.p_lo);
      n.eps_hi = n.eps_lo + hw;
      n.p_hi = hi_of(n.p_lo);
      n.xi_lo = local_coord(mesh, k_lo, n.p_lo);
      n.xi_hi = local_coord(mesh, k_hi, n.p_hi);
      n.dm = n.p_lo * n.p_lo * band_.state_weight(n.eps_hi) * 0.5 * (b - a) * rule.weights[q];
      fill(n);
      pairs_.push_back(n);
    }
  }
}

void CollisionOperator::residual(const DgField& f, const PotentialSolution& pot, double q, DgField& R,
                                 bool accumulate, const WorkerPool* pool) const {
  const TensorMesh& mesh = *mesh_;
  XSamples xs;
  xs.nq = x_rule_.n;
  xs.x.resize(mesh.nx() * xs.nq);
  xs.E.resize(xs.x.size());
  xs.wx.resize(xs.x.size());
  for (std::size_t i = 0; i < mesh.nx(); ++i)
    for (int qq = 0; qq < xs.nq; ++qq) {
      const double x = mesh.x_edges()[i] + 0.5 * mesh.dx(i) * (x_rule_.nodes[qq] + 1.0);
      xs.x[i * xs.nq + qq] = x;
      xs.E[i * xs.nq + qq] = pot.E_at(x);
      xs.wx[i * xs.nq + qq] = form_ == Formulation::entropy ? std::exp(-q * pot.phi_at(x)) : 1.0;
    }
  residual(f, xs, R, accumulate, pool);
}

void CollisionOperator::residual(const DgField& f, const XSamples& xs, DgField& R, bool accumulate,
                                 const WorkerPool* pool) const {
  const TensorMesh& mesh = *mesh_;
  if (R.cell_count() != f.cell_count() || R.degree() != f.degree()) {
    R = DgField(f.mesh_ptr(), f.degree());
    accumulate = false;
  }
  if (!accumulate) R.set_zero();
  if (!active()) return;
  if (xs.nq != x_rule_.n) throw ConfigError("collision: x-sample count does not match the collision rule");

  const int n1 = f.n1(), nb2 = n1 * n1;
  const std::size_t np = mesh.np(), nmu = mesh.nmu();
  const bool entropy = form_ == Formulation::entropy;
  const double c_em = prm_.c(1), c_ab = prm_.c(-1), c_el = prm_.c(0);

  parallel_for(pool, mesh.nx(), [&](std::size_t b, std::size_t e) {
    std::vector<double> u(np * nmu * nb2), S(np * nmu * nb2);
    std::vector<double> wlo(nmu * n1), whi(nmu * n1);
    for (std::size_t i = b; i < e; ++i) {
      for (int qx = 0; qx < x_rule_.n; ++qx) {
        const double* Px = &x_table_.val[qx * n1];
        // u[k, m, ap, am]: the field restricted to x = x_q
        for (std::size_t k = 0; k < np; ++k)
          for (std::size_t m = 0; m < nmu; ++m) {
            const double* c = f.cell(mesh.index(i, k, m));
            double* uk = &u[(k * nmu + m) * nb2];
            for (int a = 0; a < nb2; ++a) {
              double s = 0.0;
              for (int ax = 0; ax < n1; ++ax) s += c[ax * nb2 + a] * Px[ax];
              uk[a] = s;
            }
          }
        std::fill(S.begin(), S.end(), 0.0);

        const auto slice = [&](std::size_t k, const std::array<double, 5>& P, std::vector<double>& w) {
          double F = 0.0;
          for (std::size_t m = 0; m < nmu; ++m) {
            const double* uk = &u[(k * nmu + m) * nb2];
            for (int am = 0; am < n1; ++am) {
              double s = 0.0;
              for (int ap = 0; ap < n1; ++ap) s += uk[ap * n1 + am] * P[ap];
              w[m * n1 + am] = s;
            }
            F += mesh.dmu(m) * w[m * n1];
          }
          return F;
        };
        // S[k, m, ap, am] += weight * P[ap] * (gain * dmu [am = 0] - loss_rate * dmu/(2am+1) * w[m, am])
        const auto deposit = [&](std::size_t k, const std::array<double, 5>& P, double gain, double loss,
                                 const std::vector<double>& w) {
          for (std::size_t m = 0; m < nmu; ++m) {
            double* Sk = &S[(k * nmu + m) * nb2];
            const double dmu = mesh.dmu(m);
            for (int ap = 0; ap < n1; ++ap) {
              Sk[ap * n1] += P[ap] * gain * dmu;
              for (int am = 0; am < n1; ++am) Sk[ap * n1 + am] -= P[ap] * loss * dmu / (2 * am + 1) * w[m * n1 + am];
            }
          }
        };

        for (const TransitionNode& n : pairs_) {
          const double Flo = slice(n.k_lo, n.P_lo, wlo);
          const double Fhi = slice(n.k_hi, n.P_hi, whi);
          const double hlo = entropy ? std::exp(n.eps_lo) : 1.0;
          const double hhi = entropy ? std::exp(n.eps_hi) : 1.0;
          // emission hi -> lo with c_{+1}, absorption lo -> hi with c_{-1}
          deposit(n.k_lo, n.P_lo, hlo * two_pi * c_em * n.dm * Fhi, hlo * four_pi * c_ab * n.dm, wlo);
          deposit(n.k_hi, n.P_hi, hhi * two_pi * c_ab * n.dm * Flo, hhi * four_pi * c_em * n.dm, whi);
        }
        if (c_el > 0.0)
          for (const TransitionNode& n : elastic_) {
            const double F = slice(n.k_lo, n.P_lo, wlo);
            const double h = entropy ? std::exp(n.eps_lo) : 1.0;
            deposit(n.k_lo, n.P_lo, h * two_pi * c_el * n.dm * F, h * four_pi * c_el * n.dm, wlo);
          }

        const double Wx = 0.5 * mesh.dx(i) * x_rule_.weights[qx] * xs.wx[i * x_rule_.n + qx];
        for (std::size_t k = 0; k < np; ++k)
          for (std::size_t m = 0; m < nmu; ++m) {
            double* r = R.cell(mesh.index(i, k, m));
            const double* Sk = &S[(k * nmu + m) * nb2];
            for (int ax = 0; ax < n1; ++ax)
              for (int a = 0; a < nb2; ++a) r[ax * nb2 + a] += Wx * Px[ax] * Sk[a];
          }
      }
    }
  });
}

double CollisionOperator::mu_integral(const DgField& f, std::size_t i, double xi_x, double p) const {
  const TensorMesh& mesh = *mesh_;
  p = std::clamp(p, 0.0, mesh.p_max());
  const std::size_t k = mesh.locate_p(p);
  const int n1 = f.n1();
  const auto Px = legendre_values(degree_, xi_x);
  const auto Pp = legendre_values(degree_, local_coord(mesh, k, p));
  double F = 0.0;
  for (std::size_t m = 0; m < mesh.nmu(); ++m) {
    const double* c = f.cell(mesh.index(i, k, m));
    double s = 0.0;
    for (int ax = 0; ax < n1; ++ax)
      for (int ap = 0; ap < n1; ++ap) s += c[DgField::mode(ax, ap, 0, n1)] * Px[ax] * Pp[ap];
    F += mesh.dmu(m) * s;
  }
  return F;
}

double CollisionOperator::gain(const DgField& f, std::size_t i, double xi_x, double p) const {
  const double eps = band_.energy(p);
  double g = 0.0;
  for (int j = -1; j <= 1; ++j) {
    const double c = prm_.c(j);
    const double e = eps + j * prm_.hbar_omega;
    if (c == 0.0 || band_.chi(e) == 0.0) continue;
    const double pj = j == 0 ? p : band_.momentum_of_energy(e);
    g += c * band_.state_weight(e) * mu_integral(f, i, xi_x, pj);
  }
  return two_pi * g;
}

double CollisionOperator::pointwise(const DgField& f, std::size_t i, std::size_t k, std::size_t m, double xi_x,
                                    double xi_p, double xi_mu) const {
  const TensorMesh& mesh = *mesh_;
  const double p = mesh.p_edges()[k] + 0.5 * mesh.dp(k) * (xi_p + 1.0);
  return gain(f, i, xi_x, p) - frequency(p) * evaluate(f, i, k, m, xi_x, xi_p, xi_mu);
}

}  // namespace bpdg
