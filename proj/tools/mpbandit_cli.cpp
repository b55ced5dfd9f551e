// mpbandit: run decentralized multi-player bandit experiments.
//
//   mpbandit run --config cfg.json [--seed N] [--runs N] [--horizon N] [--out results.csv]
//   mpbandit bounds --config cfg.json
//   mpbandit counterexample --trials N [--seed N]

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "mpbandit/analysis.hpp"
#include "mpbandit/config.hpp"
#include "mpbandit/errors.hpp"
#include "mpbandit/output.hpp"
#include "mpbandit/simulator.hpp"

namespace {

using namespace mpbandit;

int run_command(const std::string& config_path, std::optional<std::uint64_t> seed,
                std::optional<std::uint64_t> runs, std::optional<std::uint64_t> horizon,
                std::optional<std::string> out) {
  ExperimentConfig config = load_config(config_path);
  if (seed) config.seed = *seed;
  if (runs) config.runs = *runs;
  if (horizon) config.horizon = *horizon;
  if (out) config.output_path = *out;
  validate(config);

  const ExperimentSpec spec = to_experiment_spec(config);
  const ExperimentResult result = run_experiment(spec);
  emit_csv(result, config.output_path);
  write_metadata(config, *spec.environment, config.output_path);

  std::uint64_t violations = 0;
  double residual = 0.0;
  for (const auto& ledger : result.ledgers) {
    violations += ledger.coordination_violations();
    residual = std::max(residual, ledger.max_decomposition_residual());
  }
  std::printf("%s variant %s: %llu runs x %llu rounds\n", std::string(to_string(config.algorithm)).c_str(),
              std::string(to_string(config.variant)).c_str(), static_cast<unsigned long long>(config.runs),
              static_cast<unsigned long long>(config.horizon));
  std::printf("final pseudo-regret: mean %s std %s\n", format_number(result.mean.back()).c_str(),
              format_number(result.stddev.back()).c_str());
  std::printf("max decomposition residual: %g\n", residual);
  if (config.variant == Variant::A) {
    std::printf("coordination violations: %llu\n", static_cast<unsigned long long>(violations));
  }
  std::printf("wrote %s and %s\n", config.output_path.c_str(), metadata_path(config.output_path).string().c_str());
  return 0;
}

int bounds_command(const std::string& config_path) {
  const ExperimentConfig config = load_config(config_path);
  const auto env = build_environment(config);
  BoundInput input;
  input.gaps = env->gaps();
  input.k_max = env->space().size();
  input.horizon = static_cast<double>(config.horizon);
  std::printf("horizon: %llu\n", static_cast<unsigned long long>(config.horizon));
  std::printf("k_max: %zu\n", input.k_max);
  std::printf("gap_dependent_bound: %s\n", format_number(gap_dependent_regret_bound(input)).c_str());
  std::printf("gap_independent_bound: %s\n", format_number(gap_independent_regret_bound(input)).c_str());
  return 0;
}

int counterexample_command(std::uint64_t trials, std::uint64_t seed) {
  const ProbabilityEstimate est = estimate_lock_in_probability(trials, seed);
  std::printf("trials: %llu\n", static_cast<unsigned long long>(est.trials));
  std::printf("p_hat: %s\n", format_number(est.p).c_str());
  std::printf("std_error: %s\n", format_number(est.std_error).c_str());
  std::printf("interval_3sigma: [%s, %s]\n", format_number(est.p - 3.0 * est.std_error).c_str(),
              format_number(est.p + 3.0 * est.std_error).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized multi-player multi-armed bandit experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> runs;
  std::optional<std::uint64_t> horizon;
  std::optional<std::string> out;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV + metadata");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override the root seed");
  run->add_option("--runs", runs, "Override the number of runs");
  run->add_option("--horizon", horizon, "Override the horizon T");
  run->add_option("--out", out, "Override the output CSV path");

  std::string bounds_config;
  auto* bounds = app.add_subcommand("bounds", "Print the regret bounds for the configured environment");
  bounds->add_option("--config", bounds_config, "Experiment config (JSON)")->required();

  std::uint64_t trials = 1'000'000;
  std::uint64_t ce_seed = 0;
  auto* counter = app.add_subcommand("counterexample", "Estimate the lock-in probability of the counterexample");
  counter->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  counter->add_option("--seed", ce_seed, "Seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, seed, runs, horizon, out);
    if (*bounds) return bounds_command(bounds_config);
    if (*counter) return counterexample_command(trials, ce_seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
