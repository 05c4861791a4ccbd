#include "bpdg/time_integration.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "bpdg/error.hpp"
#include "bpdg/scenario.hpp"

namespace bpdg {

SolverOptions solver_options(const SimulationConfig& c) {
  SolverOptions o;
  o.rk = c.rk_order();
  o.cfl_safety = c.numerics.cfl_safety;
  o.limiter = c.numerics.limiter;
  if (c.numerics.alpha != "auto") {
    const auto& s = c.numerics.alpha;
    std::from_chars(s.data(), s.data() + s.size(), o.alpha);
  }
  o.route = c.numerics.collision_route == "split" ? CollisionRoute::split : CollisionRoute::whole;
  return o;
}

std::vector<ShuOsherStage> shu_osher_stages(int order) {
  switch (order) {
    case 1: return {{0.0, 1.0}};
    case 2: return {{0.0, 1.0}, {0.5, 0.5}};
    case 3: return {{0.0, 1.0}, {0.75, 0.25}, {1.0 / 3.0, 2.0 / 3.0}};
    default: throw ConfigError("Runge-Kutta order must be 1, 2 or 3");
  }
}

Solver::Solver(std::shared_ptr<SpatialOperator> op, DgField f0, SolverOptions opt, const WorkerPool* pool)
    : op_(std::move(op)), opt_(opt), pool_(pool), f_(std::move(f0)) {
  shu_osher_stages(opt_.rk);
  const ModelSetup& s = op_->setup();
  if (s.frozen && !op_->frozen()) op_->freeze(op_->potential(f_));
  cp_ = build_control_points(op_->mesh(), s.degree, &op_->collision());
  if (opt_.limiter) limit_nonnegative(f_, cp_, pool_);
  if (s.formulation != Formulation::standard && op_->collision().active())
    mass_collision_.emplace(s.mesh, s.degree, s.band, s.scattering, Formulation::standard);
}

CflBudget Solver::budget(const DgField& u, CollisionRoute route) const {
  const ModelSetup& s = op_->setup();
  const PotentialSolution pot = op_->potential(u);
  return compute_budget(op_->mesh(), s.band, pot, s.poisson.q, s.degree, &op_->collision(), u, opt_.cfl_safety,
                        opt_.alpha, route);
}

DgField Solver::euler(const DgField& u, double dt, std::size_t& limited) const {
  DgField out = u;
  if (dt == 0.0) return out;
  DgField L;
  op_->rhs(u, op_->potential(u), L, pool_);
  out.axpy(dt, L);
  if (opt_.limiter) limited += limit_nonnegative(out, cp_, pool_).limited;
  return out;
}

DgField Solver::advance(const DgField& u, double dt, std::size_t& limited) const {
  DgField stage = u;
  for (const ShuOsherStage& s : shu_osher_stages(opt_.rk)) {
    DgField e = euler(stage, dt, limited);
    if (s.a == 0.0) {
      stage = std::move(e);
    } else {
      e.scale(s.b);
      e.axpy(s.a, u);
      stage = std::move(e);
    }
  }
  return stage;
}

StepRecord Solver::step(double dt_cap) {
  StepRecord r;
  CollisionRoute route = opt_.route;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      if (opt_.fixed_dt > 0.0) {
        r.budget = CflBudget{};
        r.budget.dt = opt_.fixed_dt;
        r.budget.binding = "fixed";
      } else {
        r.budget = budget(f_, route);
      }
      r.dt = std::min(r.budget.dt, dt_cap);
      r.binding = r.budget.binding;
      r.route = r.budget.route;
      std::size_t limited = 0;
      DgField next = advance(f_, r.dt, limited);
      if (opt_.limiter)
        for (double a : cell_averages(next))
          if (a < 0.0) throw StepFailure("negative cell average after the step");
      f_ = std::move(next);
      t_ += r.dt;
      r.t = t_;
      r.limiter_count = limited;
      std::tie(r.min_control, r.max_control) = control_range(f_, cp_);
      r.retried = attempt > 0;
      return r;
    } catch (const StepFailure&) {
      if (attempt > 0 || route == CollisionRoute::split || !op_->collision().active() || opt_.fixed_dt > 0.0) throw;
      route = CollisionRoute::split;
    }
  }
  throw StepFailure("unreachable");
}

DiagnosticsRow Solver::diagnostics(const StepRecord& r) const {
  const ModelSetup& s = op_->setup();
  const PotentialSolution pot = potential();
  DiagnosticsRow d;
  d.t = r.t;
  d.dt = r.dt;
  d.binding = r.binding;
  d.mass = total_mass(f_);
  d.entropy_norm = entropy_norm(f_, pot, s.band, s.poisson.q);
  d.jump_dissipation = jump_dissipation(f_, pot, s.band, s.poisson.q, s.boundary.x);
  std::tie(d.J_min, d.J_max) = value_range(current(f_, s.band));
  d.min_control_value = r.min_control;
  d.limiter_count = r.limiter_count;
  const CollisionOperator* C = mass_collision_ ? &*mass_collision_ : &op_->collision();
  if (C->active()) {
    DgField RC;
    C->residual(f_, pot, s.poisson.q, RC, false, pool_);
    double rate = 0.0;
    for (std::size_t c = 0; c < RC.cell_count(); ++c) rate += RC.cell(c)[0];
    d.chi_mass_leak = r.dt * rate;
  }
  return d;
}

RunSummary run(const SimulationConfig& c, const RunHooks& hooks, const WorkerPool* pool) {
  RunSummary sum;
  sum.config_hash = config_hash(c);
  const ModelSetup setup = make_setup(c);
  auto op = std::make_shared<SpatialOperator>(setup);
  Solver solver(op, initial_field(c, setup), solver_options(c), pool);

  namespace fs = std::filesystem;
  std::optional<DiagnosticsCsv> csv;
  const fs::path dir = c.run.output_dir;
  if (hooks.write_files) {
    fs::create_directories(dir);
    csv.emplace((dir / "diagnostics.csv").string());
  }
  const auto snapshot = [&](const std::string& name) {
    if (hooks.write_files) write_snapshot((dir / name).string(), solver.field(), setup.band, solver.time(), sum.config_hash);
  };
  snapshot("snapshot_000000.csv");

  DgField last_good = solver.field();
  while (solver.time() < c.run.t_final * (1.0 - 1e-14) && sum.steps < c.run.max_steps) {
    StepRecord r;
    try {
      r = solver.step(c.run.t_final - solver.time());
    } catch (const StepFailure& e) {
      sum.failure = e.what();
      if (hooks.write_files) write_snapshot((dir / "snapshot_last_good.csv").string(), last_good, setup.band,
                                            solver.time(), sum.config_hash);
      break;
    }
    ++sum.steps;
    const DiagnosticsRow row = solver.diagnostics(r);
    if (csv) csv->write(row);
    if (hooks.on_step) hooks.on_step(r, row, solver);
    last_good = solver.field();
    if (c.run.snapshot_every > 0 && sum.steps % c.run.snapshot_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%06ld.csv", sum.steps);
      snapshot(name);
    }
  }
  sum.t = solver.time();
  return sum;
}

}  // namespace bpdg
