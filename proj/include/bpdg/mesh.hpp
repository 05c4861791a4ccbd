#pragma once

#include <cstddef>
#include <vector>

namespace bpdg {

// Tensor-product cells over (x, p, mu) = [0, L] x [0, p_max] x [-1, 1].
// Cells are numbered with x slowest and mu fastest.
class TensorMesh {
 public:
  TensorMesh(std::vector<double> x_edges, std::vector<double> p_edges, std::vector<double> mu_edges);

  const std::vector<double>& x_edges() const { return x_edges_; }
  const std::vector<double>& p_edges() const { return p_edges_; }
  const std::vector<double>& mu_edges() const { return mu_edges_; }

  double L() const { return x_edges_.back(); }
  double p_max() const { return p_edges_.back(); }

  std::size_t nx() const { return x_edges_.size() - 1; }
  std::size_t np() const { return p_edges_.size() - 1; }
  std::size_t nmu() const { return mu_edges_.size() - 1; }
  std::size_t cell_count() const { return nx() * np() * nmu(); }

  double dx(std::size_t i) const { return x_edges_[i + 1] - x_edges_[i]; }
  double dp(std::size_t k) const { return p_edges_[k + 1] - p_edges_[k]; }
  double dmu(std::size_t m) const { return mu_edges_[m + 1] - mu_edges_[m]; }

  std::size_t index(std::size_t i, std::size_t k, std::size_t m) const { return (i * np() + k) * nmu() + m; }

  // Integral of p^2 dp dmu dx over the cell; throws std::out_of_range on bad indices.
  double cell_volume(std::size_t i, std::size_t k, std::size_t m) const;
  double total_volume() const;

  // Cell containing p; a point exactly on an interior edge belongs to the lower cell.
  std::size_t locate_p(double p) const;
  std::size_t locate_x(double x) const;

 private:
  std::vector<double> x_edges_, p_edges_, mu_edges_;
};

TensorMesh build_mesh(int nx, int np, int nmu, double L, double p_max);

}  // namespace bpdg
