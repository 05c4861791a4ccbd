#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpdg/dg_field.hpp"
#include "bpdg/parallel.hpp"
#include "bpdg/positivity.hpp"

namespace bpdg {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Random coefficients with positive averages, limited to be nonnegative at the
// control points; `envelope` multiplies each cell (e.g. a Maxwellian tail).
DgField random_positive_field(std::shared_ptr<const TensorMesh> mesh, int degree, std::uint64_t seed,
                              const std::function<double(double x, double p, double mu)>& envelope = nullptr);

std::vector<CheckResult> verify_invariants(std::uint64_t seed, const WorkerPool* pool = nullptr);

struct ConvergenceRow {
  int nx = 0;
  double error = 0.0;
  double order = 0.0;  // log2(previous error / error); 0 on the first row
  double seconds = 0.0;
};

struct ConvergenceSetup {
  int nx0 = 16;
  int np = 8, nmu = 16;
  int degree = 1;
  int rk = 2;
  double L = 1.0, p_max = 1.0;
  double t_final = 0.1;
  double amplitude = 0.5;
};

// Free streaming (E = 0, no collisions) of f0 = 1 + A sin(2 pi x / L) against the exact
// characteristic solution, refining in x only.
std::vector<ConvergenceRow> convergence_study(int levels, const ConvergenceSetup& s = {},
                                              const WorkerPool* pool = nullptr);

}  // namespace bpdg
