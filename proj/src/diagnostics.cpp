#include "bpdg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "bpdg/cell_kernels.hpp"
#include "bpdg/error.hpp"

namespace bpdg {

int entropy_quad_points(int degree) { return degree + 5; }

double entropy_norm(const DgField& f, const PotentialSolution& pot, const BandModel& band, double q) {
  const TensorMass M = TensorMass::weighted(
      f.mesh(), f.degree(), [&](double x) { return std::exp(-q * pot.phi_at(x)); },
      [&](double p) { return std::exp(band.energy(p)); }, entropy_quad_points(f.degree()));
  return M.inner(f, f);
}

double jump_dissipation(const DgField& f, const PotentialSolution& pot, const BandModel& band, double q,
                        XBoundary xbc) {
  using namespace kernels;
  const TensorMesh& mesh = f.mesh();
  const int n1 = f.n1(), nq = entropy_quad_points(f.degree());
  const QuadratureRule rule = gauss_legendre(nq);
  const BasisTable t = basis_table(f.degree(), rule.nodes);
  const double* V = t.val.data();
  const std::size_t nx = mesh.nx(), np = mesh.np(), nmu = mesh.nmu();

  std::vector<double> xq(nx * nq), Eq(nx * nq), wxq(nx * nq), wxe(nx + 1);
  for (std::size_t i = 0; i < nx; ++i)
    for (int a = 0; a < nq; ++a) {
      const double x = mesh.x_edges()[i] + 0.5 * mesh.dx(i) * (rule.nodes[a] + 1.0);
      xq[i * nq + a] = x;
      Eq[i * nq + a] = pot.E_at(x);
      wxq[i * nq + a] = std::exp(-q * pot.phi_at(x));
    }
  for (std::size_t i = 0; i <= nx; ++i) wxe[i] = std::exp(-q * pot.phi_at(mesh.x_edges()[i]));
  // Periodic faces use one weight on both sides of the wrap.
  if (xbc == XBoundary::periodic) wxe[nx] = wxe[0];
  const auto pnode = [&](std::size_t k, int a) { return mesh.p_edges()[k] + 0.5 * mesh.dp(k) * (rule.nodes[a] + 1.0); };
  const auto munode = [&](std::size_t m, int a) { return mesh.mu_edges()[m] + 0.5 * mesh.dmu(m) * (rule.nodes[a] + 1.0); };

  double lo[max_points * max_points], hi[max_points * max_points];
  double total = 0.0;
  const double* zero_coeffs = nullptr;
  std::vector<double> zeros(f.modes(), 0.0);
  zero_coeffs = zeros.data();

  // x faces: edge i between cells i-1 and i
  for (std::size_t e = 0; e <= nx; ++e) {
    const bool boundary = e == 0 || e == nx;
    if (boundary && (xbc != XBoundary::periodic || e == nx)) continue;
    const std::size_t il = (e + nx - 1) % nx, ir = e % nx;
    for (std::size_t k = 0; k < np; ++k)
      for (std::size_t m = 0; m < nmu; ++m) {
        trace(n1, nq, 0, f.cell(mesh.index(il, k, m)), t.hi.data(), V, lo);
        trace(n1, nq, 0, f.cell(mesh.index(ir, k, m)), t.lo.data(), V, hi);
        const double fw = mesh.dp(k) * mesh.dmu(m) / 4.0;
        for (int a = 0; a < nq; ++a) {
          const double p = pnode(k, a);
          const double w = p * p * band.velocity(p) * std::exp(band.energy(p)) * wxe[e];
          for (int b = 0; b < nq; ++b) {
            const double d = hi[a * nq + b] - lo[a * nq + b];
            total += fw * rule.weights[a] * rule.weights[b] * w * std::abs(munode(m, b)) * d * d;
          }
        }
      }
  }
  // p faces, including p_max with a zero exterior trace
  for (std::size_t e = 1; e <= np; ++e) {
    const double pe = mesh.p_edges()[e], wpe = std::exp(band.energy(pe));
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t m = 0; m < nmu; ++m) {
        trace(n1, nq, 1, f.cell(mesh.index(i, e - 1, m)), t.hi.data(), V, lo);
        trace(n1, nq, 1, e < np ? f.cell(mesh.index(i, e, m)) : zero_coeffs, t.lo.data(), V, hi);
        const double fw = mesh.dx(i) * mesh.dmu(m) / 4.0;
        for (int a = 0; a < nq; ++a)
          for (int b = 0; b < nq; ++b) {
            const double d = hi[a * nq + b] - lo[a * nq + b];
            const double bn = pe * pe * std::abs(q * Eq[i * nq + a] * munode(m, b));
            total += fw * rule.weights[a] * rule.weights[b] * bn * wxq[i * nq + a] * wpe * d * d;
          }
      }
  }
  // mu faces
  for (std::size_t e = 1; e < nmu; ++e) {
    const double me = mesh.mu_edges()[e], geo = (1.0 - me) * (1.0 + me);
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t k = 0; k < np; ++k) {
        trace(n1, nq, 2, f.cell(mesh.index(i, k, e - 1)), t.hi.data(), V, lo);
        trace(n1, nq, 2, f.cell(mesh.index(i, k, e)), t.lo.data(), V, hi);
        const double fw = mesh.dx(i) * mesh.dp(k) / 4.0;
        for (int a = 0; a < nq; ++a)
          for (int b = 0; b < nq; ++b) {
            const double p = pnode(k, b);
            const double d = hi[a * nq + b] - lo[a * nq + b];
            const double bn = p * geo * std::abs(q * Eq[i * nq + a]);
            total += fw * rule.weights[a] * rule.weights[b] * bn * wxq[i * nq + a] * std::exp(band.energy(p)) * d * d;
          }
      }
  }
  return 0.25 * total;
}

std::pair<double, double> collision_dissipation(const DgField& f, const CollisionOperator& coll_entropy,
                                                const XSamples& xs) {
  DgField R;
  coll_entropy.residual(f, xs, R, false);
  double s = 0.0, scale = 0.0;
  for (std::size_t c = 0; c < f.cell_count(); ++c) {
    double sc = 0.0;
    for (int a = 0; a < f.modes(); ++a) sc += f.cell(c)[a] * R.cell(c)[a];
    s += sc;
    scale += std::abs(sc);
  }
  return {s, scale};
}

EntropyCheck semi_discrete_entropy_check(const DgField& f, const PotentialSolution& pot, const ModelSetup& setup) {
  EntropyCheck r;
  if (setup.boundary.x != XBoundary::periodic) {
    r.skipped = true;
    return r;
  }
  const double q = setup.poisson.q;
  const TransportOperator T(f.mesh_ptr(), f.degree(), setup.band, q, setup.boundary, Formulation::entropy);
  const CollisionOperator C(f.mesh_ptr(), f.degree(), setup.band, setup.scattering, Formulation::entropy);
  const XSamples xs = T.sample_potential(pot);
  DgField RT, RC;
  T.residual(f, xs, RT);
  C.residual(f, xs, RC, false);
  double lhs = 0.0, scale = 0.0;
  for (std::size_t c = 0; c < f.cell_count(); ++c) {
    double sc = 0.0;
    for (int a = 0; a < f.modes(); ++a) sc += f.cell(c)[a] * (RT.cell(c)[a] + RC.cell(c)[a]);
    lhs += sc;
    scale += std::abs(sc);
  }
  const double jump = jump_dissipation(f, pot, setup.band, q, setup.boundary.x);
  r.lhs = lhs;
  r.rhs = -jump;
  r.scale = scale + jump;
  r.holds = r.lhs <= r.rhs + 1e-10 * r.scale;
  return r;
}

std::pair<double, double> value_range(const PiecewisePolynomial& u) {
  double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
  const auto& br = u.breaks();
  constexpr int samples = 33;
  for (std::size_t j = 0; j < u.pieces(); ++j)
    for (int s = 0; s < samples; ++s) {
      const double x = br[j] + (br[j + 1] - br[j]) * s / (samples - 1);
      const double v = u.value_in(j, x);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return {lo, hi};
}

DiagnosticsCsv::DiagnosticsCsv(const std::string& path) : out_(path) {
  if (!out_) throw ConfigError("cannot open " + path);
  out_ << header() << '\n';
}

std::string DiagnosticsCsv::header() {
  return "t,dt,binding,mass,entropy_norm,jump_dissipation,J_min,J_max,min_control_value,limiter_count,chi_mass_leak";
}

std::string DiagnosticsCsv::format(const DiagnosticsRow& r) {
  std::ostringstream s;
  s << std::setprecision(17) << r.t << ',' << r.dt << ',' << r.binding << ',' << r.mass << ',' << r.entropy_norm << ','
    << r.jump_dissipation << ',' << r.J_min << ',' << r.J_max << ',' << r.min_control_value << ',' << r.limiter_count
    << ',' << r.chi_mass_leak;
  return s.str();
}

void DiagnosticsCsv::write(const DiagnosticsRow& r) { out_ << format(r) << '\n' << std::flush; }

void write_snapshot(const std::string& path, const DgField& f, const BandModel& band, double t,
                    const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path);
  const TensorMesh& mesh = f.mesh();
  out << std::setprecision(17);
  out << "# t=" << t << " nx=" << mesh.nx() << " np=" << mesh.np() << " nmu=" << mesh.nmu() << " L=" << mesh.L()
      << " p_max=" << mesh.p_max() << " degree=" << f.degree()
      << " band=" << (band.kind() == BandKind::parabolic ? "parabolic" : "kane") << " m_star=" << band.m_star()
      << " alpha_k=" << band.alpha_k() << " config_hash=" << config_hash << '\n';
  out << "# i,k,m,cell_average,coefficients (x,p,mu lexicographic)\n";
  for (std::size_t i = 0; i < mesh.nx(); ++i)
    for (std::size_t k = 0; k < mesh.np(); ++k)
      for (std::size_t m = 0; m < mesh.nmu(); ++m) {
        out << i << ',' << k << ',' << m << ',' << cell_average(f, i, k, m);
        const double* c = f.cell(mesh.index(i, k, m));
        for (int a = 0; a < f.modes(); ++a) out << ',' << c[a];
        out << '\n';
      }
}

}  // namespace bpdg
