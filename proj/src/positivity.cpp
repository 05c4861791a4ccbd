#include "bpdg/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "bpdg/cell_kernels.hpp"
#include "bpdg/error.hpp"

namespace bpdg {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

// Max |E| over x-cell i. The field's breakpoints refine the x-mesh, so every
// piece lies inside one cell.
double max_abs_E(const PotentialSolution& pot, const TensorMesh& mesh, std::size_t i) {
  const auto& br = pot.E.breaks();
  const double a = mesh.x_edges()[i], b = mesh.x_edges()[i + 1];
  double m = 0.0;
  // Pieces overlapping the cell; a piece reaching past the cell only overestimates.
  for (std::size_t j = 0; j < pot.E.pieces(); ++j)
    if (br[j] < b && br[j + 1] > a) m = std::max(m, pot.E.max_abs_on(j));
  return m;
}
}  // namespace

int lobatto_points(int degree) { return degree + 2; }

double lobatto_end_weight(int degree) { return 0.5 * gauss_lobatto(lobatto_points(degree)).weights[0]; }

TransportKernels transport_kernels(const TensorMesh& mesh, const BandModel& band, const PotentialSolution& pot, double q,
                                   int degree) {
  const QuadratureRule lob = gauss_lobatto(lobatto_points(degree));
  const double w = 0.5 * lob.weights[0];
  TransportKernels K{inf, inf, inf};

  std::vector<double> Emax(mesh.nx());
  for (std::size_t i = 0; i < mesh.nx(); ++i) Emax[i] = std::abs(q) * max_abs_E(pot, mesh, i);
  const double Eglob = *std::max_element(Emax.begin(), Emax.end());

  for (std::size_t k = 0; k < mesh.np(); ++k) {
    double vmax = 0.0;
    for (double xi : lob.nodes) vmax = std::max(vmax, band.velocity(mesh.p_edges()[k] + 0.5 * mesh.dp(k) * (xi + 1.0)));
    const double xi1 = lob.n > 2 ? lob.nodes[1] : 0.0;
    const double p_low = k == 0 ? mesh.p_edges()[0] + 0.5 * mesh.dp(0) * (xi1 + 1.0) : mesh.p_edges()[k];
    for (std::size_t m = 0; m < mesh.nmu(); ++m) {
      const double mu_lo = mesh.mu_edges()[m], mu_hi = mesh.mu_edges()[m + 1];
      const double amu = std::max(std::abs(mu_lo), std::abs(mu_hi));
      const double smu = std::max((1.0 - mu_lo) * (1.0 + mu_lo), (1.0 - mu_hi) * (1.0 + mu_hi));
      double dxmin = inf;
      for (std::size_t i = 0; i < mesh.nx(); ++i) dxmin = std::min(dxmin, mesh.dx(i));
      if (vmax * amu > 0.0) K.x = std::min(K.x, w * dxmin / (vmax * amu));
      if (Eglob == 0.0) continue;
      for (std::size_t i = 0; i < mesh.nx(); ++i) {
        if (Emax[i] == 0.0) continue;
        if (amu > 0.0) K.p = std::min(K.p, w * mesh.dp(k) / (Emax[i] * amu));
        if (smu > 0.0) K.mu = std::min(K.mu, w * mesh.dmu(m) * p_low / (Emax[i] * smu));
      }
    }
  }
  return K;
}

std::array<double, 3> equalizing_weights(const TransportKernels& K) {
  const double r[3] = {1.0 / K.x, 1.0 / K.p, 1.0 / K.mu};
  const double s = r[0] + r[1] + r[2];
  if (!(s > 0.0)) return {1.0 / 3, 1.0 / 3, 1.0 / 3};
  return {r[0] / s, r[1] / s, r[2] / s};
}

double transport_bound(const TransportKernels& K, const std::array<double, 3>& s) {
  const auto term = [](double sl, double kl) { return std::isinf(kl) ? inf : sl * kl; };
  return std::min({term(s[0], K.x), term(s[1], K.p), term(s[2], K.mu)});
}

std::array<double, 3> transport_cfl(const TensorMesh& mesh, const BandModel& band, const PotentialSolution& pot, double q,
                                    int degree, double alpha, const std::array<double, 3>& s) {
  const TransportKernels K = transport_kernels(mesh, band, pot, q, degree);
  const auto term = [&](double sl, double kl) { return std::isinf(kl) ? inf : alpha * sl * kl; };
  return {term(s[0], K.x), term(s[1], K.p), term(s[2], K.mu)};
}

namespace {

// min f/|Q| over Gauss points with Q < 0; 0 if such a point has f <= 0.
double collision_kernel(const CollisionOperator& coll, const DgField& f) {
  if (!coll.active()) return inf;
  const TensorMesh& mesh = f.mesh();
  const EnergyShiftTable& tab = coll.shift_table();
  const int nq = tab.nq, n1 = f.n1(), deg = f.degree();
  const QuadratureRule& xr = coll.x_rule();
  const QuadratureRule pr = gauss_legendre(nq);
  const BasisTable Tx = basis_table(deg, xr.nodes), Tp = basis_table(deg, pr.nodes), Tm = basis_table(deg, pr.nodes);
  const ScatteringParams& prm = coll.params();
  const std::size_t nodes = tab.p.size();

  std::vector<std::array<std::vector<double>, 3>> Pshift(nodes);
  std::vector<double> nu(nodes);
  for (std::size_t r = 0; r < nodes; ++r) {
    nu[r] = coll.frequency(tab.p[r]);
    for (int j = 0; j < 3; ++j)
      if (tab.e[r][j].inside) Pshift[r][j] = legendre_values(deg, tab.e[r][j].xi);
  }

  double B = inf;
  std::vector<double> G(nodes), vals(static_cast<std::size_t>(nq * nq * nq));
  for (std::size_t i = 0; i < mesh.nx(); ++i)
    for (int qx = 0; qx < xr.n; ++qx) {
      for (std::size_t r = 0; r < nodes; ++r) {
        double g = 0.0;
        for (int j = 0; j < 3; ++j) {
          const ShiftEntry& s = tab.e[r][j];
          const double c = prm.c(j - 1);
          if (!s.inside || c == 0.0) continue;
          double F = 0.0;
          for (std::size_t m = 0; m < mesh.nmu(); ++m) {
            const double* cc = f.cell(mesh.index(i, s.cell, m));
            double v = 0.0;
            for (int ax = 0; ax < n1; ++ax)
              for (int ap = 0; ap < n1; ++ap)
                v += cc[DgField::mode(ax, ap, 0, n1)] * Tx.v(qx, ax) * Pshift[r][j][ap];
            F += mesh.dmu(m) * v;
          }
          g += c * s.weight * F;
        }
        G[r] = 2.0 * std::numbers::pi * g;
      }
      for (std::size_t k = 0; k < mesh.np(); ++k)
        for (std::size_t m = 0; m < mesh.nmu(); ++m) {
          const double* cc = f.cell(mesh.index(i, k, m));
          for (int qp = 0; qp < nq; ++qp)
            for (int qm = 0; qm < nq; ++qm) {
              double v = 0.0;
              for (int ax = 0; ax < n1; ++ax)
                for (int ap = 0; ap < n1; ++ap)
                  for (int am = 0; am < n1; ++am)
                    v += cc[DgField::mode(ax, ap, am, n1)] * Tx.v(qx, ax) * Tp.v(qp, ap) * Tm.v(qm, am);
              const std::size_t r = k * nq + qp;
              const double Q = G[r] - nu[r] * v;
              if (Q < 0.0) B = v <= 0.0 ? 0.0 : std::min(B, v / -Q);
            }
        }
    }
  return B;
}

}  // namespace

double collision_cfl(const CollisionOperator& coll, const DgField& f, double alpha) {
  const double B = collision_kernel(coll, f);
  return std::isinf(B) ? inf : (1.0 - alpha) * B;
}

double collision_cfl_split(const CollisionOperator& coll, double alpha) {
  const double nu = coll.nu_max();
  return nu > 0.0 ? (1.0 - alpha) / nu : inf;
}

std::pair<double, double> optimal_alpha(double A, double B) {
  if (!(A > 0.0) && !(B > 0.0)) throw StepFailure("no admissible time step: transport and collision bounds are zero");
  if (std::isinf(A) && std::isinf(B)) return {0.5, inf};
  if (std::isinf(B)) return {1.0 - 1e-9, A};
  if (std::isinf(A)) return {1e-9, B};
  return {B / (A + B), A * B / (A + B)};
}

CflBudget compute_budget(const TensorMesh& mesh, const BandModel& band, const PotentialSolution& pot, double q,
                         int degree, const CollisionOperator* coll, const DgField& f, double safety, double alpha,
                         CollisionRoute route) {
  CflBudget b;
  b.safety = safety;
  b.route = route;
  b.kernels = transport_kernels(mesh, band, pot, q, degree);
  b.s = equalizing_weights(b.kernels);
  const double A = 1.0 / (1.0 / b.kernels.x + 1.0 / b.kernels.p + 1.0 / b.kernels.mu);

  double B = inf;
  if (coll && coll->active()) {
    // Either bound certifies the collision half of the split on its own; the whole-Q
    // one degenerates where f is tiny but Q < 0, so the larger of the two is used.
    const double split = coll->nu_max() > 0.0 ? 1.0 / coll->nu_max() : inf;
    B = route == CollisionRoute::whole ? collision_kernel(*coll, f) : 0.0;
    if (B < split) {
      b.route = CollisionRoute::split;
      B = split;
    }
  }
  b.collision_kernel = B;

  double dt;
  if (alpha < 0.0) {
    std::tie(b.alpha, dt) = optimal_alpha(A, B);
  } else {
    b.alpha = alpha;
    dt = std::min(std::isinf(A) ? inf : alpha * A, std::isinf(B) ? inf : (1.0 - alpha) * B);
  }
  const auto scaled = [&](double sl, double kl) { return std::isinf(kl) ? inf : b.alpha * sl * kl; };
  b.dt_x = scaled(b.s[0], b.kernels.x);
  b.dt_p = scaled(b.s[1], b.kernels.p);
  b.dt_mu = scaled(b.s[2], b.kernels.mu);
  b.dt_collision = std::isinf(B) ? inf : (1.0 - b.alpha) * B;
  if (!(dt > 0.0) || std::isinf(dt)) throw StepFailure("time-step budget is not positive and finite");
  b.dt = safety * dt;

  if (B < A)
    b.binding = "collision";
  else if (b.kernels.x <= b.kernels.p && b.kernels.x <= b.kernels.mu)
    b.binding = "x";
  else if (b.kernels.p <= b.kernels.mu)
    b.binding = "p";
  else
    b.binding = "mu";
  return b;
}

namespace {

void append_basis(int degree, const std::vector<std::array<double, 3>>& pts, std::vector<double>& out) {
  const int n1 = degree + 1, nb = n1 * n1 * n1;
  out.assign(pts.size() * nb, 0.0);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const auto Px = legendre_values(degree, pts[j][0]);
    const auto Pp = legendre_values(degree, pts[j][1]);
    const auto Pm = legendre_values(degree, pts[j][2]);
    for (int ax = 0; ax < n1; ++ax)
      for (int ap = 0; ap < n1; ++ap)
        for (int am = 0; am < n1; ++am) out[j * nb + DgField::mode(ax, ap, am, n1)] = Px[ax] * Pp[ap] * Pm[am];
  }
}

}  // namespace

ControlPointSet build_control_points(const TensorMesh& mesh, int degree, const CollisionOperator* coll) {
  ControlPointSet cp;
  cp.degree = degree;
  const QuadratureRule lob = gauss_lobatto(lobatto_points(degree));
  const QuadratureRule gau = gauss_legendre(degree + 2);
  for (double a : lob.nodes)
    for (double b : lob.nodes)
      for (double c : lob.nodes) cp.common.push_back({a, b, c});
  for (int dir = 0; dir < 3; ++dir)
    for (double l : lob.nodes)
      for (double g1 : gau.nodes)
        for (double g2 : gau.nodes) {
          std::array<double, 3> z{};
          z[dir] = l;
          z[(dir + 1) % 3] = g1;
          z[(dir + 2) % 3] = g2;
          cp.common.push_back(z);
        }
  append_basis(degree, cp.common, cp.common_basis);

  cp.per_p_cell.resize(mesh.np());
  cp.per_p_cell_basis.resize(mesh.np());
  if (coll && coll->active()) {
    std::vector<std::vector<double>> sites(mesh.np());
    for (const auto& node : coll->shift_table().e)
      for (const ShiftEntry& s : node)
        if (s.inside) sites[s.cell].push_back(s.xi);
    for (const TransitionNode& n : coll->transitions()) {
      sites[n.k_lo].push_back(n.xi_lo);
      sites[n.k_hi].push_back(n.xi_hi);
    }
    const QuadratureRule& xr = coll->x_rule();
    for (std::size_t k = 0; k < mesh.np(); ++k) {
      auto& v = sites[k];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-13; }), v.end());
      for (double xi : v)
        for (double x : xr.nodes)
          for (double m : gau.nodes) cp.per_p_cell[k].push_back({x, xi, m});
      append_basis(degree, cp.per_p_cell[k], cp.per_p_cell_basis[k]);
    }
  }
  return cp;
}

namespace {

// (min, max) over the control points of one cell.
std::pair<double, double> cell_range(const double* c, int nb, const ControlPointSet& cp, std::size_t k) {
  double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
  const auto scan = [&](const std::vector<double>& B) {
    const std::size_t n = B.size() / nb;
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      for (int a = 0; a < nb; ++a) v += B[j * nb + a] * c[a];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  scan(cp.common_basis);
  if (k < cp.per_p_cell_basis.size()) scan(cp.per_p_cell_basis[k]);
  return {lo, hi};
}

}  // namespace

LimiterResult limit_nonnegative(DgField& f, const ControlPointSet& cp, const WorkerPool* pool) {
  const TensorMesh& mesh = f.mesh();
  if (cp.degree != f.degree()) throw ConfigError("limiter: control points built for a different degree");
  const int nb = f.modes();
  const std::size_t n = mesh.cell_count();
  std::vector<unsigned char> limited(n, 0);
  std::vector<double> mins(n), maxs(n);
  std::vector<std::size_t> bad;
  parallel_for(pool, n, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const std::size_t m = c % mesh.nmu(), k = (c / mesh.nmu()) % mesh.np(), i = c / (mesh.nmu() * mesh.np());
      double* cc = f.cell(c);
      const double avg = cell_average(f, i, k, m);
      if (avg < 0.0) {
        mins[c] = avg;
        maxs[c] = avg;
        limited[c] = 2;
        continue;
      }
      auto [lo, hi] = cell_range(cc, nb, cp, k);
      // Roundoff-level undershoot left by a previous pass is not limited again.
      if (lo < -1e-15 * std::max(avg, hi)) {
        const double theta = std::clamp(avg / (avg - lo), 0.0, 1.0);
        for (int a = 0; a < nb; ++a) cc[a] *= theta;
        cc[0] += (1.0 - theta) * avg;
        limited[c] = 1;
        lo = avg + theta * (lo - avg);
        hi = avg + theta * (hi - avg);
      }
      mins[c] = lo;
      maxs[c] = hi;
    }
  });
  LimiterResult r;
  r.min_after = std::numeric_limits<double>::max();
  r.max_value = std::numeric_limits<double>::lowest();
  for (std::size_t c = 0; c < n; ++c) {
    if (limited[c] == 2) throw StepFailure("negative cell average in cell " + std::to_string(c));
    r.limited += limited[c];
    r.min_after = std::min(r.min_after, mins[c]);
    r.max_value = std::max(r.max_value, maxs[c]);
  }
  return r;
}

std::pair<double, double> control_range(const DgField& f, const ControlPointSet& cp) {
  const TensorMesh& mesh = f.mesh();
  double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const std::size_t k = (c / mesh.nmu()) % mesh.np();
    const auto [a, b] = cell_range(f.cell(c), f.modes(), cp, k);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  return {lo, hi};
}

}  // namespace bpdg
