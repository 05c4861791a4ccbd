#include "bpdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bpdg/error.hpp"

namespace bpdg {

namespace {

void check_edges(const std::vector<double>& e, const char* name, double lo, double hi, bool check_hi) {
  if (e.size() < 2) throw ConfigError(std::string(name) + ": need at least two edges");
  if (e.front() != lo) throw ConfigError(std::string(name) + ": first edge must be " + std::to_string(lo));
  if (check_hi && e.back() != hi) throw ConfigError(std::string(name) + ": last edge must be " + std::to_string(hi));
  for (std::size_t j = 0; j + 1 < e.size(); ++j)
    if (!(e[j + 1] > e[j])) throw ConfigError(std::string(name) + ": edges must be strictly increasing");
}

std::vector<double> uniform_edges(int n, double a, double b) {
  std::vector<double> e(n + 1);
  for (int j = 0; j <= n; ++j) e[j] = a + (b - a) * j / n;
  e.back() = b;
  return e;
}

std::size_t locate(const std::vector<double>& e, double v) {
  auto it = std::lower_bound(e.begin() + 1, e.end() - 1, v);
  return static_cast<std::size_t>(it - e.begin()) - 1;
}

}  // namespace

TensorMesh::TensorMesh(std::vector<double> x_edges, std::vector<double> p_edges, std::vector<double> mu_edges)
    : x_edges_(std::move(x_edges)), p_edges_(std::move(p_edges)), mu_edges_(std::move(mu_edges)) {
  check_edges(x_edges_, "x_edges", 0.0, 0.0, false);
  check_edges(p_edges_, "p_edges", 0.0, 0.0, false);
  check_edges(mu_edges_, "mu_edges", -1.0, 1.0, true);
}

double TensorMesh::cell_volume(std::size_t i, std::size_t k, std::size_t m) const {
  if (i >= nx() || k >= np() || m >= nmu()) throw std::out_of_range("cell index out of range");
  const double a = p_edges_[k], b = p_edges_[k + 1];
  return dx(i) * (b * b * b - a * a * a) / 3.0 * dmu(m);
}

double TensorMesh::total_volume() const {
  double v = 0.0;
  for (std::size_t i = 0; i < nx(); ++i)
    for (std::size_t k = 0; k < np(); ++k)
      for (std::size_t m = 0; m < nmu(); ++m) v += cell_volume(i, k, m);
  return v;
}

std::size_t TensorMesh::locate_p(double p) const { return locate(p_edges_, p); }
std::size_t TensorMesh::locate_x(double x) const { return locate(x_edges_, x); }

TensorMesh build_mesh(int nx, int np, int nmu, double L, double p_max) {
  std::string errors;
  if (nx < 1) errors += " N_x must be >= 1;";
  if (np < 1) errors += " N_p must be >= 1;";
  if (nmu < 1) errors += " N_mu must be >= 1;";
  if (!(L > 0.0) || !std::isfinite(L)) errors += " L must be > 0;";
  if (!(p_max > 0.0) || !std::isfinite(p_max)) errors += " p_max must be > 0;";
  if (!errors.empty()) throw ConfigError("invalid mesh:" + errors);
  return TensorMesh(uniform_edges(nx, 0.0, L), uniform_edges(np, 0.0, p_max), uniform_edges(nmu, -1.0, 1.0));
}

}  // namespace bpdg
