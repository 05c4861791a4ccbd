#include "bpdg/dg_field.hpp"

#include <Eigen/Dense>
#include <cassert>
#include <stdexcept>

#include "bpdg/error.hpp"

namespace bpdg {

BasisTable basis_table(int degree, const std::vector<double>& nodes) {
  BasisTable t;
  t.n1 = degree + 1;
  t.nq = static_cast<int>(nodes.size());
  t.val.resize(t.nq * t.n1);
  t.der.resize(t.nq * t.n1);
  for (int q = 0; q < t.nq; ++q)
    for (int a = 0; a < t.n1; ++a) {
      const auto [p, dp] = legendre_with_derivative(a, nodes[q]);
      t.val[q * t.n1 + a] = p;
      t.der[q * t.n1 + a] = dp;
    }
  t.lo = legendre_values(degree, -1.0);
  t.hi = legendre_values(degree, 1.0);
  return t;
}

std::vector<double> legendre_values(int degree, double xi) {
  std::vector<double> v(degree + 1);
  v[0] = 1.0;
  if (degree >= 1) v[1] = xi;
  for (int a = 2; a <= degree; ++a) v[a] = ((2 * a - 1) * xi * v[a - 1] - (a - 1) * v[a - 2]) / a;
  return v;
}

DgField::DgField(std::shared_ptr<const TensorMesh> mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
  if (degree < 0 || degree > 4) throw ConfigError("DG degree must be in [0, 4]");
  coeffs_.assign(mesh_->cell_count() * modes(), 0.0);
}

void DgField::set_zero() { std::fill(coeffs_.begin(), coeffs_.end(), 0.0); }

void DgField::axpy(double a, const DgField& other) {
  assert(other.coeffs_.size() == coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += a * other.coeffs_[j];
}

void DgField::scale(double a) {
  for (double& c : coeffs_) c *= a;
}

void tensor_apply(int n, const double* A, const double* B, const double* C, const double* x, double* y) {
  double t1[125], t2[125];
  // contract mu
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int cc = 0; cc < n; ++cc) s += C[c * n + cc] * x[(a * n + b) * n + cc];
        t1[(a * n + b) * n + c] = s;
      }
  // contract p
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int bb = 0; bb < n; ++bb) s += B[b * n + bb] * t1[(a * n + bb) * n + c];
        t2[(a * n + b) * n + c] = s;
      }
  // contract x
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int aa = 0; aa < n; ++aa) s += A[a * n + aa] * t2[(aa * n + b) * n + c];
        y[(a * n + b) * n + c] = s;
      }
}

namespace {

// Gram matrix of P_a on [lo, hi] under weight w, and its inverse.
void gram_1d(int n1, double lo, double hi, const std::function<double(double)>& w, const QuadratureRule& rule,
             double* M, double* Minv) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n1, n1);
  const double h = hi - lo;
  for (int q = 0; q < rule.n; ++q) {
    const double z = lo + 0.5 * h * (rule.nodes[q] + 1.0);
    const double wq = 0.5 * h * rule.weights[q] * w(z);
    const auto P = legendre_values(n1 - 1, rule.nodes[q]);
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n1; ++b) G(a, b) += wq * P[a] * P[b];
  }
  const Eigen::MatrixXd Gi = G.llt().solve(Eigen::MatrixXd::Identity(n1, n1));
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) {
      M[a * n1 + b] = G(a, b);
      Minv[a * n1 + b] = Gi(a, b);
    }
}

void diag_1d(int n1, double h, double* M, double* Minv) {
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) {
      M[a * n1 + b] = a == b ? h / (2 * a + 1) : 0.0;
      Minv[a * n1 + b] = a == b ? (2 * a + 1) / h : 0.0;
    }
}

}  // namespace

TensorMass TensorMass::standard(const TensorMesh& mesh, int degree) {
  const auto one = [](double) { return 1.0; };
  return weighted(mesh, degree, one, one, degree + 2);
}

TensorMass TensorMass::weighted(const TensorMesh& mesh, int degree, const std::function<double(double)>& wx,
                                const std::function<double(double)>& wp, int nq) {
  TensorMass M;
  const int n1 = degree + 1, b = n1 * n1;
  M.n1_ = n1;
  M.nx_ = mesh.nx();
  M.np_ = mesh.np();
  M.nmu_ = mesh.nmu();
  M.mx_.resize(M.nx_ * b);
  M.ix_.resize(M.nx_ * b);
  M.mp_.resize(M.np_ * b);
  M.ip_.resize(M.np_ * b);
  M.mm_.resize(M.nmu_ * b);
  M.im_.resize(M.nmu_ * b);
  const QuadratureRule rule = gauss_legendre(nq);
  const auto& xe = mesh.x_edges();
  const auto& pe = mesh.p_edges();
  for (std::size_t i = 0; i < M.nx_; ++i) gram_1d(n1, xe[i], xe[i + 1], wx, rule, &M.mx_[i * b], &M.ix_[i * b]);
  const auto wp2 = [&](double p) { return p * p * wp(p); };
  for (std::size_t k = 0; k < M.np_; ++k) gram_1d(n1, pe[k], pe[k + 1], wp2, rule, &M.mp_[k * b], &M.ip_[k * b]);
  for (std::size_t m = 0; m < M.nmu_; ++m) diag_1d(n1, mesh.dmu(m), &M.mm_[m * b], &M.im_[m * b]);
  return M;
}

void TensorMass::apply(std::size_t i, std::size_t k, std::size_t m, const double* in, double* out) const {
  const int b = n1_ * n1_;
  tensor_apply(n1_, &mx_[i * b], &mp_[k * b], &mm_[m * b], in, out);
}

void TensorMass::solve(std::size_t i, std::size_t k, std::size_t m, double* block) const {
  const int b = n1_ * n1_;
  double tmp[125];
  tensor_apply(n1_, &ix_[i * b], &ip_[k * b], &im_[m * b], block, tmp);
  std::copy(tmp, tmp + b * n1_, block);
}

void TensorMass::solve(DgField& f) const {
  const auto& mesh = f.mesh();
  for (std::size_t i = 0; i < mesh.nx(); ++i)
    for (std::size_t k = 0; k < mesh.np(); ++k)
      for (std::size_t m = 0; m < mesh.nmu(); ++m) solve(i, k, m, f.cell(mesh.index(i, k, m)));
}

double TensorMass::inner(const DgField& a, const DgField& b) const {
  const auto& mesh = a.mesh();
  const int nb = a.modes();
  double tmp[125];
  double s = 0.0;
  for (std::size_t i = 0; i < mesh.nx(); ++i)
    for (std::size_t k = 0; k < mesh.np(); ++k)
      for (std::size_t m = 0; m < mesh.nmu(); ++m) {
        const std::size_t c = mesh.index(i, k, m);
        apply(i, k, m, b.cell(c), tmp);
        for (int j = 0; j < nb; ++j) s += a.cell(c)[j] * tmp[j];
      }
  return s;
}

DgField project(const PhaseFunction& f, std::shared_ptr<const TensorMesh> mesh_ptr, int degree, int nq) {
  DgField out(mesh_ptr, degree);
  const TensorMesh& mesh = *mesh_ptr;
  if (nq <= 0) nq = degree + 6;
  const QuadratureRule rule = gauss_legendre(nq);
  const BasisTable t = basis_table(degree, rule.nodes);
  const TensorMass M = TensorMass::standard(mesh, degree);
  const int n1 = degree + 1;
  const auto& xe = mesh.x_edges();
  const auto& pe = mesh.p_edges();
  const auto& me = mesh.mu_edges();
  for (std::size_t i = 0; i < mesh.nx(); ++i)
    for (std::size_t k = 0; k < mesh.np(); ++k)
      for (std::size_t m = 0; m < mesh.nmu(); ++m) {
        double* c = out.cell(mesh.index(i, k, m));
        const double jac = mesh.dx(i) * mesh.dp(k) * mesh.dmu(m) / 8.0;
        for (int qx = 0; qx < nq; ++qx) {
          const double x = xe[i] + 0.5 * mesh.dx(i) * (rule.nodes[qx] + 1.0);
          for (int qp = 0; qp < nq; ++qp) {
            const double p = pe[k] + 0.5 * mesh.dp(k) * (rule.nodes[qp] + 1.0);
            for (int qm = 0; qm < nq; ++qm) {
              const double mu = me[m] + 0.5 * mesh.dmu(m) * (rule.nodes[qm] + 1.0);
              const double w = jac * rule.weights[qx] * rule.weights[qp] * rule.weights[qm] * p * p * f(x, p, mu);
              for (int ax = 0; ax < n1; ++ax)
                for (int ap = 0; ap < n1; ++ap)
                  for (int am = 0; am < n1; ++am)
                    c[DgField::mode(ax, ap, am, n1)] += w * t.v(qx, ax) * t.v(qp, ap) * t.v(qm, am);
            }
          }
        }
        M.solve(i, k, m, c);
      }
  return out;
}

double evaluate(const DgField& f, std::size_t i, std::size_t k, std::size_t m, double xi_x, double xi_p,
                double xi_mu) {
  const auto& mesh = f.mesh();
  if (i >= mesh.nx() || k >= mesh.np() || m >= mesh.nmu()) throw std::out_of_range("evaluate: cell index");
  const int n1 = f.n1();
  const auto Px = legendre_values(f.degree(), xi_x);
  const auto Pp = legendre_values(f.degree(), xi_p);
  const auto Pm = legendre_values(f.degree(), xi_mu);
  const double* c = f.cell(mesh.index(i, k, m));
  double s = 0.0;
  for (int ax = 0; ax < n1; ++ax)
    for (int ap = 0; ap < n1; ++ap)
      for (int am = 0; am < n1; ++am) s += c[DgField::mode(ax, ap, am, n1)] * Px[ax] * Pp[ap] * Pm[am];
  return s;
}

double evaluate_at(const DgField& f, double x, double p, double mu) {
  const auto& mesh = f.mesh();
  const std::size_t i = mesh.locate_x(x), k = mesh.locate_p(p);
  std::size_t m = 0;
  while (m + 1 < mesh.nmu() && mu > mesh.mu_edges()[m + 1]) ++m;
  const auto ref = [](double v, double a, double b) { return 2.0 * (v - a) / (b - a) - 1.0; };
  return evaluate(f, i, k, m, ref(x, mesh.x_edges()[i], mesh.x_edges()[i + 1]),
                  ref(p, mesh.p_edges()[k], mesh.p_edges()[k + 1]), ref(mu, mesh.mu_edges()[m], mesh.mu_edges()[m + 1]));
}

std::vector<double> p_moments(const TensorMesh& mesh, std::size_t k, int degree) {
  const QuadratureRule rule = gauss_legendre(degree + 2);
  std::vector<double> mom(degree + 1, 0.0);
  const double lo = mesh.p_edges()[k], h = mesh.dp(k);
  for (int q = 0; q < rule.n; ++q) {
    const double p = lo + 0.5 * h * (rule.nodes[q] + 1.0);
    const auto P = legendre_values(degree, rule.nodes[q]);
    for (int a = 0; a <= degree; ++a) mom[a] += 0.5 * h * rule.weights[q] * p * p * P[a];
  }
  return mom;
}

double cell_integral(const DgField& f, std::size_t i, std::size_t k, std::size_t m) {
  const auto& mesh = f.mesh();
  const auto mom = p_moments(mesh, k, f.degree());
  const double* c = f.cell(mesh.index(i, k, m));
  double s = 0.0;
  for (int ap = 0; ap < f.n1(); ++ap) s += c[DgField::mode(0, ap, 0, f.n1())] * mom[ap];
  return mesh.dx(i) * mesh.dmu(m) * s;
}

double cell_average(const DgField& f, std::size_t i, std::size_t k, std::size_t m) {
  return cell_integral(f, i, k, m) / f.mesh().cell_volume(i, k, m);
}

std::vector<double> cell_averages(const DgField& f) {
  const auto& mesh = f.mesh();
  std::vector<double> avg(mesh.cell_count());
  for (std::size_t i = 0; i < mesh.nx(); ++i)
    for (std::size_t k = 0; k < mesh.np(); ++k)
      for (std::size_t m = 0; m < mesh.nmu(); ++m) avg[mesh.index(i, k, m)] = cell_average(f, i, k, m);
  return avg;
}

double total_mass(const DgField& f) {
  const auto& mesh = f.mesh();
  double s = 0.0;
  for (std::size_t i = 0; i < mesh.nx(); ++i)
    for (std::size_t k = 0; k < mesh.np(); ++k)
      for (std::size_t m = 0; m < mesh.nmu(); ++m) s += cell_integral(f, i, k, m);
  return s;
}

double weighted_norm2(const DgField& f) { return TensorMass::standard(f.mesh(), f.degree()).inner(f, f); }

}  // namespace bpdg
