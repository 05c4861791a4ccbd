#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "bpdg/config.hpp"
#include "bpdg/diagnostics.hpp"
#include "bpdg/positivity.hpp"
#include "bpdg/spatial_operator.hpp"

namespace bpdg {

struct SolverOptions {
  int rk = 2;
  double cfl_safety = 0.9;
  bool limiter = true;
  double alpha = -1.0;  // < 0 picks the optimal split every step
  CollisionRoute route = CollisionRoute::whole;
  double fixed_dt = 0.0;  // > 0 bypasses the budget
};

SolverOptions solver_options(const SimulationConfig& c);

struct StepRecord {
  double t = 0.0;  // time after the step
  double dt = 0.0;
  std::string binding;
  std::size_t limiter_count = 0;
  double min_control = 0.0, max_control = 0.0;
  CollisionRoute route = CollisionRoute::whole;
  bool retried = false;
  CflBudget budget;
};

// Shu-Osher stage coefficients: stage s output = a u^n + b Euler(previous stage).
struct ShuOsherStage {
  double a, b;
};
std::vector<ShuOsherStage> shu_osher_stages(int order);

class Solver {
 public:
  Solver(std::shared_ptr<SpatialOperator> op, DgField f0, SolverOptions opt, const WorkerPool* pool = nullptr);

  // One step of size min(budget, dt_cap). Retries once with the loss-split collision
  // bound, then throws StepFailure.
  StepRecord step(double dt_cap = std::numeric_limits<double>::infinity());

  // u + dt L(u) with the potential of u, limited when enabled.
  DgField euler(const DgField& u, double dt, std::size_t& limited) const;
  DgField advance(const DgField& u, double dt, std::size_t& limited) const;
  CflBudget budget(const DgField& u, CollisionRoute route) const;

  DiagnosticsRow diagnostics(const StepRecord& r) const;

  double time() const { return t_; }
  const DgField& field() const { return f_; }
  PotentialSolution potential() const { return op_->potential(f_); }
  const SpatialOperator& op() const { return *op_; }
  const ControlPointSet& control_points() const { return cp_; }
  const SolverOptions& options() const { return opt_; }

 private:
  std::shared_ptr<SpatialOperator> op_;
  SolverOptions opt_;
  const WorkerPool* pool_;
  DgField f_;
  double t_ = 0.0;
  ControlPointSet cp_;
  std::optional<CollisionOperator> mass_collision_;  // standard-tested, for the leak diagnostic
};

struct RunSummary {
  long steps = 0;
  double t = 0.0;
  std::string failure;  // empty on success
  std::string config_hash;
};

struct RunHooks {
  std::function<void(const StepRecord&, const DiagnosticsRow&, const Solver&)> on_step;
  bool write_files = true;
};

// Time loop to t_final; writes diagnostics.csv and snapshots under run.output_dir.
// A StepFailure stops the loop, writes the last good snapshot and is reported in the summary.
RunSummary run(const SimulationConfig& c, const RunHooks& hooks = {}, const WorkerPool* pool = nullptr);

}  // namespace bpdg
