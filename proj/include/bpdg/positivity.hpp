#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "bpdg/band.hpp"
#include "bpdg/collision.hpp"
#include "bpdg/dg_field.hpp"
#include "bpdg/parallel.hpp"
#include "bpdg/poisson.hpp"

namespace bpdg {

// Lobatto rule used for the cell-average decomposition, and its endpoint weight
// normalized to the unit interval.
int lobatto_points(int degree);
double lobatto_end_weight(int degree);

// alpha- and s-free transport bounds: dt_l = alpha s_l K_l.
struct TransportKernels {
  double x = 0.0, p = 0.0, mu = 0.0;
};
TransportKernels transport_kernels(const TensorMesh& mesh, const BandModel& band, const PotentialSolution& pot, double q,
                                   int degree);
// (dt_x, dt_p, dt_mu) for a given split alpha and simplex weights s.
std::array<double, 3> transport_cfl(const TensorMesh& mesh, const BandModel& band, const PotentialSolution& pot, double q,
                                    int degree, double alpha, const std::array<double, 3>& s);
// s_l proportional to 1/K_l: all finite constraints bind together.
std::array<double, 3> equalizing_weights(const TransportKernels& K);
// min_l s_l K_l for the given weights.
double transport_bound(const TransportKernels& K, const std::array<double, 3>& s);

// (1 - alpha) min f/|Q| over Gauss points where Q < 0; +inf when Q >= 0 everywhere,
// 0 when f <= 0 at a point with Q < 0.
double collision_cfl(const CollisionOperator& coll, const DgField& f, double alpha);
// (1 - alpha) / nu_max
double collision_cfl_split(const CollisionOperator& coll, double alpha);

// Maximizes min(alpha A, (1 - alpha) B). Throws StepFailure when both are zero.
std::pair<double, double> optimal_alpha(double A, double B);

enum class CollisionRoute { whole, split };

struct CflBudget {
  double dt_x = 0.0, dt_p = 0.0, dt_mu = 0.0, dt_collision = 0.0;
  TransportKernels kernels;
  double collision_kernel = 0.0;
  double alpha = 0.5;
  std::array<double, 3> s{};
  double safety = 0.9;
  double dt = 0.0;
  std::string binding;  // x | p | mu | collision
  CollisionRoute route = CollisionRoute::whole;
};

// alpha < 0 selects optimal_alpha.
CflBudget compute_budget(const TensorMesh& mesh, const BandModel& band, const PotentialSolution& pot, double q,
                         int degree, const CollisionOperator* coll, const DgField& f, double safety, double alpha,
                         CollisionRoute route);

// Reference points where the limited field must be nonnegative: the Lobatto tensor grid,
// Lobatto in one direction times Gauss in the other two, and the gain sites of the
// collision operator in each p-cell (x-Gauss times shifted p times mu-Gauss).
struct ControlPointSet {
  int degree = 1;
  std::vector<std::array<double, 3>> common;
  std::vector<std::vector<std::array<double, 3>>> per_p_cell;
  std::vector<double> common_basis;                  // points x modes
  std::vector<std::vector<double>> per_p_cell_basis;
};
ControlPointSet build_control_points(const TensorMesh& mesh, int degree, const CollisionOperator* coll = nullptr);

struct LimiterResult {
  std::size_t limited = 0;
  double min_after = 0.0;
  double max_value = 0.0;  // max over control points after limiting
};

// Rescales each cell's deviation from its average by theta = avg / (avg - min) when the
// minimum over control points is negative. Throws StepFailure on a negative average.
LimiterResult limit_nonnegative(DgField& f, const ControlPointSet& cp, const WorkerPool* pool = nullptr);
// (min, max) of the field over all control points.
std::pair<double, double> control_range(const DgField& f, const ControlPointSet& cp);

}  // namespace bpdg
