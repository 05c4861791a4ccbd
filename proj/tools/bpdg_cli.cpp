#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "bpdg/config.hpp"
#include "bpdg/curvilinear.hpp"
#include "bpdg/error.hpp"
#include "bpdg/scenario.hpp"
#include "bpdg/time_integration.hpp"
#include "bpdg/verification.hpp"

using namespace bpdg;

namespace {

enum Exit { ok = 0, validation = 1, step_failure = 2, invariant = 3 };

struct RunArgs {
  std::string config;
  std::optional<std::string> output_dir, limiter, alpha, rk;
  std::optional<double> t_final, cfl_safety;
  std::optional<int> snapshot_every;
  std::optional<long> max_steps;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(SimulationConfig& c, const RunArgs& a) {
  std::string bad;
  if (a.output_dir) c.run.output_dir = *a.output_dir;
  if (a.t_final) c.run.t_final = *a.t_final;
  if (a.max_steps) c.run.max_steps = *a.max_steps;
  if (a.snapshot_every) c.run.snapshot_every = *a.snapshot_every;
  if (a.seed) c.run.seed = *a.seed;
  if (a.cfl_safety) c.numerics.cfl_safety = *a.cfl_safety;
  if (a.alpha) c.numerics.alpha = *a.alpha;
  if (a.limiter) {
    if (*a.limiter == "on") c.numerics.limiter = true;
    else if (*a.limiter == "off") c.numerics.limiter = false;
    else bad += "\n  --limiter: must be on or off";
  }
  if (a.rk) {
    if (*a.rk == "auto") c.numerics.rk = 0;
    else if (*a.rk == "1" || *a.rk == "2" || *a.rk == "3") c.numerics.rk = std::stoi(*a.rk);
    else bad += "\n  --rk: must be 1, 2 or 3";
  }
  auto errors = c.validate();
  for (const auto& e : errors) bad += "\n  " + e;
  if (!bad.empty()) throw ConfigError("invalid configuration:" + bad);
}

int cmd_run(const RunArgs& a, const WorkerPool& pool) {
  SimulationConfig c = parse_config(a.config);
  apply_overrides(c, a);
  bool violated = false;
  std::string violation;
  RunHooks hooks;
  hooks.on_step = [&](const StepRecord& r, const DiagnosticsRow&, const Solver& s) {
    if (!s.options().limiter || violated) return;
    if (r.min_control < -1e-13 * std::max(1.0, r.max_control)) {
      violated = true;
      violation = "control-point value " + std::to_string(r.min_control) + " at t = " + std::to_string(r.t);
    }
  };
  const RunSummary sum = run(c, hooks, &pool);
  std::printf("steps %ld  t %.6g  config %s  output %s\n", sum.steps, sum.t, sum.config_hash.c_str(),
              c.run.output_dir.c_str());
  if (!sum.failure.empty()) {
    std::fprintf(stderr, "step failure: %s\n", sum.failure.c_str());
    return step_failure;
  }
  if (violated) {
    std::fprintf(stderr, "invariant violation: %s\n", violation.c_str());
    return invariant;
  }
  return ok;
}

int cmd_verify_beta(int points, std::uint64_t seed, const std::string& config) {
  BandModel band = BandModel::kane(1.0, 0.5, 5.0);
  double q = 1.0;
  if (!config.empty()) {
    const SimulationConfig c = parse_config(config);
    band = make_band(c);
    q = c.poisson.q;
  }
  const BetaReport reports[] = {verify_spherical(default_spherical_beta(band, q), points, seed),
                                verify_kane(default_kane_beta(1.0, 0.7, band.alpha_k() > 0 ? band.alpha_k() : 0.5),
                                            points, seed)};
  bool pass = true;
  for (const auto& r : reports) {
    std::printf("%-10s points %d  max|div| %.3e  max|beta| %.3e  ratio %.3e  max orth %.3e  %.3fs  %s\n",
                r.family.c_str(), r.points, r.max_div, r.max_beta, r.max_div / r.max_beta, r.max_orth_rel, r.seconds,
                r.pass ? "PASS" : "FAIL");
    pass = pass && r.pass;
  }
  return pass ? ok : invariant;
}

int cmd_verify_invariants(std::uint64_t seed, const WorkerPool& pool) {
  bool pass = true;
  for (const auto& r : verify_invariants(seed, &pool)) {
    std::printf("%s  %-48s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    pass = pass && r.pass;
  }
  return pass ? ok : invariant;
}

int cmd_convergence(int levels, const ConvergenceSetup& s, const WorkerPool& pool) {
  std::printf("%6s %14s %8s %9s\n", "nx", "L2 error", "order", "seconds");
  for (const auto& r : convergence_study(levels, s, &pool))
    std::printf("%6d %14.6e %8.3f %9.2f\n", r.nx, r.error, r.order, r.seconds);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discontinuous Galerkin Boltzmann-Poisson solver"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "run a simulation from a config file");
  run_cmd->add_option("--config", ra.config, "config file")->required();
  run_cmd->add_option("--output-dir", ra.output_dir);
  run_cmd->add_option("--t-final", ra.t_final);
  run_cmd->add_option("--max-steps", ra.max_steps);
  run_cmd->add_option("--limiter", ra.limiter, "on|off");
  run_cmd->add_option("--cfl-safety", ra.cfl_safety);
  run_cmd->add_option("--alpha", ra.alpha, "auto|<value>");
  run_cmd->add_option("--rk", ra.rk, "1|2|3");
  run_cmd->add_option("--snapshot-every", ra.snapshot_every);
  run_cmd->add_option("--seed", ra.seed);
  run_cmd->add_option("--threads", threads);

  int points = 1000;
  std::uint64_t seed = 1;
  std::string beta_config;
  auto* beta_cmd = app.add_subcommand("verify-beta", "check divergence and orthogonality of the transport fields");
  beta_cmd->add_option("--points", points);
  beta_cmd->add_option("--seed", seed);
  beta_cmd->add_option("--config", beta_config);

  auto* inv_cmd = app.add_subcommand("verify-invariants", "run the property batteries");
  inv_cmd->add_option("--seed", seed);
  inv_cmd->add_option("--threads", threads);

  int levels = 3;
  ConvergenceSetup conv;
  auto* conv_cmd = app.add_subcommand("convergence", "free-streaming refinement study");
  conv_cmd->add_option("--levels", levels);
  conv_cmd->add_option("--nx0", conv.nx0);
  conv_cmd->add_option("--np", conv.np);
  conv_cmd->add_option("--nmu", conv.nmu);
  conv_cmd->add_option("--t-final", conv.t_final);
  conv_cmd->add_option("--threads", threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : validation;
  }

  try {
    const WorkerPool pool(threads);
    if (*run_cmd) return cmd_run(ra, pool);
    if (*beta_cmd) return cmd_verify_beta(points, seed, beta_config);
    if (*inv_cmd) return cmd_verify_invariants(seed, pool);
    if (*conv_cmd) return cmd_convergence(levels, conv, pool);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return validation;
  } catch (const StepFailure& e) {
    std::fprintf(stderr, "step failure: %s\n", e.what());
    return step_failure;
  } catch (const CompatibilityError& e) {
    std::fprintf(stderr, "%s (imbalance %.3e)\n", e.what(), e.imbalance);
    return step_failure;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return validation;
  }
  return ok;
}
