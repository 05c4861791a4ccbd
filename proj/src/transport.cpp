#include "bpdg/transport.hpp"

#include <cmath>
#include <numbers>

#include "bpdg/cell_kernels.hpp"
#include "bpdg/error.hpp"

namespace bpdg {

double upwind_flux_x(double mu, double eps_prime, double f_minus, double f_plus) {
  return eps_prime * (0.5 * (mu + std::abs(mu)) * f_minus + 0.5 * (mu - std::abs(mu)) * f_plus);
}

double upwind_flux_p(double E, double mu, double f_minus, double f_plus, double q) {
  const double h = -q * E * mu;
  return 0.5 * (h + std::abs(h)) * f_minus + 0.5 * (h - std::abs(h)) * f_plus;
}

double upwind_flux_mu(double E, double f_minus, double f_plus, double q) {
  const double h = -q * E;
  return 0.5 * (h + std::abs(h)) * f_minus + 0.5 * (h - std::abs(h)) * f_plus;
}

namespace {

PSamples make_p_samples(const TensorMesh& mesh, const BandModel& band, const QuadratureRule& rule, bool weighted) {
  PSamples ps;
  ps.nq = rule.n;
  const std::size_t np = mesh.np();
  ps.p.resize(np * rule.n);
  ps.v.resize(np * rule.n);
  ps.wp.resize(np * rule.n);
  ps.wp_edge.resize(np + 1);
  for (std::size_t k = 0; k < np; ++k)
    for (int q = 0; q < rule.n; ++q) {
      const double p = mesh.p_edges()[k] + 0.5 * mesh.dp(k) * (rule.nodes[q] + 1.0);
      ps.p[k * rule.n + q] = p;
      ps.v[k * rule.n + q] = band.velocity(p);
      ps.wp[k * rule.n + q] = weighted ? std::exp(band.energy(p)) : 1.0;
    }
  for (std::size_t k = 0; k <= np; ++k) ps.wp_edge[k] = weighted ? std::exp(band.energy(mesh.p_edges()[k])) : 1.0;
  return ps;
}

}  // namespace

TransportOperator::TransportOperator(std::shared_ptr<const TensorMesh> mesh, int degree, BandModel band, double q,
                                     BoundarySpec bc, Formulation form, int nq)
    : mesh_(std::move(mesh)), degree_(degree), band_(band), q_(q), bc_(bc), form_(form) {
  if (nq <= 0) nq = form == Formulation::entropy ? degree + 5 : degree + 2;
  if (nq > kernels::max_points) throw ConfigError("transport: too many quadrature points");
  rule_ = gauss_legendre(nq);
  table_ = basis_table(degree, rule_.nodes);
  ps_ = make_p_samples(*mesh_, band_, rule_, form == Formulation::entropy);
  ps_unweighted_ = make_p_samples(*mesh_, band_, rule_, false);
  maxwell_norm_ = 4.0 * std::numbers::pi *
                  integrate([&](double p) { return std::exp(-band_.energy(p)) * p * p; }, 0.0, mesh_->p_max(), 16, 64);
}

double TransportOperator::ghost(double p, bool left) const {
  const double n = left ? bc_.left_density : bc_.right_density;
  return n * std::exp(-band_.energy(p)) / maxwell_norm_;
}

XSamples TransportOperator::sample_potential(const PotentialSolution& pot) const {
  const TensorMesh& mesh = *mesh_;
  const bool weighted = form_ == Formulation::entropy;
  XSamples xs;
  xs.nq = rule_.n;
  xs.x.resize(mesh.nx() * rule_.n);
  xs.E.resize(xs.x.size());
  xs.wx.resize(xs.x.size());
  xs.wx_edge.resize(mesh.nx() + 1);
  for (std::size_t i = 0; i < mesh.nx(); ++i)
    for (int q = 0; q < rule_.n; ++q) {
      const double x = mesh.x_edges()[i] + 0.5 * mesh.dx(i) * (rule_.nodes[q] + 1.0);
      const std::size_t j = i * rule_.n + q;
      xs.x[j] = x;
      xs.E[j] = pot.E_at(x);
      xs.wx[j] = weighted ? std::exp(-q_ * pot.phi_at(x)) : 1.0;
    }
  for (std::size_t i = 0; i <= mesh.nx(); ++i)
    xs.wx_edge[i] = weighted ? std::exp(-q_ * pot.phi_at(mesh.x_edges()[i])) : 1.0;
  return xs;
}

void TransportOperator::residual(const DgField& f, const PotentialSolution& pot, DgField& R,
                                 const WorkerPool* pool) const {
  residual(f, sample_potential(pot), R, pool);
}

void TransportOperator::residual(const DgField& f, const XSamples& xs, DgField& R, const WorkerPool* pool) const {
  if (f.mesh_ptr() != mesh_ && f.cell_count() != mesh_->cell_count())
    throw ConfigError("transport: field and operator meshes differ");
  if (R.cell_count() != f.cell_count() || R.degree() != f.degree()) R = DgField(f.mesh_ptr(), f.degree());
  const TensorMesh& mesh = *mesh_;
  parallel_for(pool, mesh.cell_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const std::size_t m = c % mesh.nmu(), k = (c / mesh.nmu()) % mesh.np(), i = c / (mesh.nmu() * mesh.np());
      double* r = R.cell(c);
      std::fill(r, r + f.modes(), 0.0);
      cell_residual(f, xs, ps_, i, k, m, r);
    }
  });
}

double TransportOperator::cell_average_increment(const DgField& f, const PotentialSolution& pot, std::size_t i,
                                                 std::size_t k, std::size_t m) const {
  XSamples xs = sample_potential(pot);
  std::fill(xs.wx.begin(), xs.wx.end(), 1.0);
  std::fill(xs.wx_edge.begin(), xs.wx_edge.end(), 1.0);
  double r[kernels::max_modes * kernels::max_modes * kernels::max_modes] = {};
  cell_residual(f, xs, ps_unweighted_, i, k, m, r);
  return r[0] / mesh_->cell_volume(i, k, m);
}

void TransportOperator::cell_residual(const DgField& f, const XSamples& xs, const PSamples& ps, std::size_t i,
                                      std::size_t k, std::size_t m, double* R) const {
  using namespace kernels;
  const TensorMesh& mesh = *mesh_;
  const int n1 = f.n1(), nq = rule_.n;
  const BasisTable& t = table_;
  const double* V = t.val.data();
  const double* D = t.der.data();
  const auto& w = rule_.weights;
  const double dx = mesh.dx(i), dp = mesh.dp(k), dmu = mesh.dmu(m);
  const double mu_lo = mesh.mu_edges()[m];
  const double* c = f.cell(mesh.index(i, k, m));

  // Volume terms: f beta . grad(test)
  {
    double fv[max_points * max_points * max_points];
    double gx[max_points * max_points * max_points];
    double gp[max_points * max_points * max_points];
    double gm[max_points * max_points * max_points];
    trial3(n1, nq, c, V, V, V, fv);
    const double jac = dx * dp * dmu / 8.0;
    for (int qx = 0; qx < nq; ++qx) {
      const double E = xs.E[i * nq + qx], wxq = xs.wx[i * nq + qx];
      for (int qp = 0; qp < nq; ++qp) {
        const double p = ps.p[k * nq + qp], v = ps.v[k * nq + qp];
        const double wpq = ps.wp[k * nq + qp];
        for (int qm = 0; qm < nq; ++qm) {
          const double mu = mu_lo + 0.5 * dmu * (rule_.nodes[qm] + 1.0);
          const int q = (qx * nq + qp) * nq + qm;
          const double W = jac * w[qx] * w[qp] * w[qm] * wxq * wpq * fv[q];
          gx[q] = W * p * p * mu * v * (2.0 / dx);
          gp[q] = W * (-q_ * E * p * p * mu) * (2.0 / dp);
          gm[q] = W * (-q_ * E * p * (1.0 - mu) * (1.0 + mu)) * (2.0 / dmu);
        }
      }
    }
    test3(n1, nq, gx, D, V, V, R);
    test3(n1, nq, gp, V, D, V, R);
    test3(n1, nq, gm, V, V, D, R);
  }

  double own[max_points * max_points], nbr[max_points * max_points], g[max_points * max_points];

  // x faces; the face grid is (p, mu).
  {
    const double fw = dp * dmu / 4.0;
    for (int side = 0; side < 2; ++side) {
      const bool upper = side == 1;
      const std::size_t edge = upper ? i + 1 : i;
      const bool boundary = upper ? i + 1 == mesh.nx() : i == 0;
      const bool periodic = bc_.x == XBoundary::periodic;
      trace(n1, nq, 0, c, upper ? t.hi.data() : t.lo.data(), V, own);
      if (!boundary || periodic) {
        const std::size_t in = upper ? (i + 1) % mesh.nx() : (i + mesh.nx() - 1) % mesh.nx();
        trace(n1, nq, 0, f.cell(mesh.index(in, k, m)), upper ? t.lo.data() : t.hi.data(), V, nbr);
      } else {
        for (int qp = 0; qp < nq; ++qp)
          for (int qm = 0; qm < nq; ++qm) nbr[qp * nq + qm] = ghost(ps.p[k * nq + qp], !upper);
      }
      const double wxe = xs.wx_edge[boundary && periodic ? 0 : edge];
      for (int qp = 0; qp < nq; ++qp) {
        const double p = ps.p[k * nq + qp], v = ps.v[k * nq + qp], wpq = ps.wp[k * nq + qp];
        for (int qm = 0; qm < nq; ++qm) {
          const double mu = mu_lo + 0.5 * dmu * (rule_.nodes[qm] + 1.0);
          const int q = qp * nq + qm;
          const double fl = upper ? own[q] : nbr[q], fr = upper ? nbr[q] : own[q];
          const double F = p * p * upwind_flux_x(mu, v, fl, fr) * wxe * wpq * (fw * w[qp] * w[qm]);
          g[q] = upper ? -F : F;
        }
      }
      test_face(n1, nq, 0, g, upper ? t.hi.data() : t.lo.data(), V, R);
    }
  }

  // p faces; the face grid is (x, mu). No flux through p = 0; zero inflow at p_max.
  {
    const double fw = dx * dmu / 4.0;
    for (int side = 0; side < 2; ++side) {
      const bool upper = side == 1;
      if (!upper && k == 0) continue;
      const double pe = mesh.p_edges()[upper ? k + 1 : k];
      const double wpe = ps.wp_edge[upper ? k + 1 : k];
      trace(n1, nq, 1, c, upper ? t.hi.data() : t.lo.data(), V, own);
      if (upper && k + 1 == mesh.np()) {
        std::fill(nbr, nbr + nq * nq, 0.0);
      } else {
        const std::size_t kn = upper ? k + 1 : k - 1;
        trace(n1, nq, 1, f.cell(mesh.index(i, kn, m)), upper ? t.lo.data() : t.hi.data(), V, nbr);
      }
      for (int qx = 0; qx < nq; ++qx) {
        const double E = xs.E[i * nq + qx], wxq = xs.wx[i * nq + qx];
        for (int qm = 0; qm < nq; ++qm) {
          const double mu = mu_lo + 0.5 * dmu * (rule_.nodes[qm] + 1.0);
          const int q = qx * nq + qm;
          const double fl = upper ? own[q] : nbr[q], fr = upper ? nbr[q] : own[q];
          const double F = pe * pe * upwind_flux_p(E, mu, fl, fr, q_) * wxq * wpe * (fw * w[qx] * w[qm]);
          g[q] = upper ? -F : F;
        }
      }
      test_face(n1, nq, 1, g, upper ? t.hi.data() : t.lo.data(), V, R);
    }
  }

  // mu faces; the face grid is (x, p). The weight 1 - mu^2 vanishes at mu = +-1.
  {
    const double fw = dx * dp / 4.0;
    for (int side = 0; side < 2; ++side) {
      const bool upper = side == 1;
      if (upper ? m + 1 == mesh.nmu() : m == 0) continue;
      const double me = mesh.mu_edges()[upper ? m + 1 : m];
      const double geo = (1.0 - me) * (1.0 + me);
      trace(n1, nq, 2, c, upper ? t.hi.data() : t.lo.data(), V, own);
      const std::size_t mn = upper ? m + 1 : m - 1;
      trace(n1, nq, 2, f.cell(mesh.index(i, k, mn)), upper ? t.lo.data() : t.hi.data(), V, nbr);
      for (int qx = 0; qx < nq; ++qx) {
        const double E = xs.E[i * nq + qx], wxq = xs.wx[i * nq + qx];
        for (int qp = 0; qp < nq; ++qp) {
          const double p = ps.p[k * nq + qp], wpq = ps.wp[k * nq + qp];
          const int q = qx * nq + qp;
          const double fl = upper ? own[q] : nbr[q], fr = upper ? nbr[q] : own[q];
          const double F = p * geo * upwind_flux_mu(E, fl, fr, q_) * wxq * wpq * (fw * w[qx] * w[qp]);
          g[q] = upper ? -F : F;
        }
      }
      test_face(n1, nq, 2, g, upper ? t.hi.data() : t.lo.data(), V, R);
    }
  }
}

}  // namespace bpdg
