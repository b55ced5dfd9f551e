// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "mpbandit/analysis.hpp"
#include "mpbandit/config.hpp"
#include "mpbandit/kernels.hpp"
#include "mpbandit/output.hpp"
#include "mpbandit/simulator.hpp"

using namespace mpbandit;

namespace {

const std::string kConfigDir = std::string(MPBANDIT_SOURCE_DIR) + "/configs/";

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
double worst_residual = 0.0;  // across every run of every criterion

void track(const ExperimentResult& r) {
  for (const auto& l : r.ledgers) worst_residual = std::max(worst_residual, l.max_decomposition_residual());
}

void report(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(static_cast<int>(limit_s)) + " s limit)";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %-32s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Player i holds each arm for prod_{j>i} K_j rounds and cycles prod_{j<i} K_j times.
std::vector<int> per_player_rule(const std::vector<int>& counts, std::size_t i) {
  std::uint64_t hold = 1, sweeps = 1;
  for (std::size_t j = i + 1; j < counts.size(); ++j) hold *= static_cast<std::uint64_t>(counts[j]);
  for (std::size_t j = 0; j < i; ++j) sweeps *= static_cast<std::uint64_t>(counts[j]);
  std::vector<int> seq;
  for (std::uint64_t s = 0; s < sweeps; ++s)
    for (int arm = 1; arm <= counts[i]; ++arm)
      for (std::uint64_t h = 0; h < hold; ++h) seq.push_back(arm);
  return seq;
}

Outcome schedule_correctness() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> m_dist(1, 4), k_dist(1, 4);
  int bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> counts(static_cast<std::size_t>(m_dist(rng)));
    for (int& k : counts) k = k_dist(rng);
    const ArmSpace space(counts);
    const auto seq = initial_schedule(space).materialize();
    if (seq.size() != space.size()) ++bad;
    for (std::size_t p = 1; p < seq.size(); ++p)
      if (lex_compare(seq[p - 1], seq[p]) != std::strong_ordering::less) ++bad;
    auto players = make_players(Algorithm::Mucb, space, KSchedule::identity(), 0);
    std::vector<std::vector<int>> played(counts.size());
    for (std::uint64_t t = 1; t <= space.size(); ++t) {
      for (std::size_t i = 0; i < counts.size(); ++i) played[i].push_back(players[i]->select(t));
      for (auto& p : players) p->observe(Feedback{0.5, std::nullopt, true});
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto rule = per_player_rule(counts, i);
      if (played[i] != rule) ++bad;
      for (std::size_t p = 0; p < seq.size() && p < rule.size(); ++p)
        if (seq[p][i] != rule[p]) ++bad;
    }
  }
  return {bad == 0, fmt("50 spaces, %d mismatches", bad)};
}

ExperimentConfig shipped(const char* file) { return load_config(kConfigDir + file); }

std::uint64_t c3_violations = 0;
std::uint64_t c3_runs = 0;

Outcome bound_dominance() {
  auto cfg = shipped("three_player_mucb.json");
  int violations = 0;
  double tightest = 0.0;  // largest regret / bound ratio seen
  for (std::uint64_t env_seed = 0; env_seed < 20; ++env_seed) {
    cfg.environment.random.seed = env_seed;
    const auto spec = to_experiment_spec(cfg);
    const auto r = run_experiment(spec);
    track(r);
    for (const auto& l : r.ledgers) {
      c3_violations += l.coordination_violations();
      ++c3_runs;
    }
    const auto& gaps = spec.environment->gaps();
    const std::size_t k_max = spec.environment->space().size();
    for (std::size_t c = 0; c < r.grid.size(); ++c) {
      const std::uint64_t t = r.grid[c];
      if (t < k_max) continue;
      const double bound = gap_dependent_regret_bound({gaps, k_max, static_cast<double>(t)});
      if (!(r.mean[c] <= bound)) ++violations;
      tightest = std::max(tightest, r.mean[c] / bound);
    }
  }
  return {violations == 0, fmt("20 envs x 10 runs, %d violations, max mean/bound %.4f", violations, tightest)};
}

Outcome coordination() {
  if (c3_runs == 0) return {false, "criterion 2 produced no runs"};
  return {c3_violations == 0, fmt("%llu runs, %llu violations", static_cast<unsigned long long>(c3_runs),
                                  static_cast<unsigned long long>(c3_violations))};
}

std::vector<std::pair<std::uint64_t, double>> mean_curve(const ExperimentResult& r) {
  std::vector<std::pair<std::uint64_t, double>> pts;
  for (std::size_t c = 0; c < r.grid.size(); ++c) pts.emplace_back(r.grid[c], r.mean[c]);
  return pts;
}

Outcome log_vs_linear() {
  const auto mucb = run_experiment(to_experiment_spec(shipped("three_player_mucb.json")));
  const auto agn = run_experiment(to_experiment_spec(shipped("three_player_agnostic.json")));
  track(mucb);
  track(agn);
  const auto fm = classify_growth(mean_curve(mucb));
  const auto fa = classify_growth(mean_curve(agn));
  const double ratio = agn.mean.back() / mucb.mean.back();
  const bool pass = fm.log_fit.r_squared > fm.linear_fit.r_squared && fa.linear_fit.r_squared > fa.log_fit.r_squared &&
                    ratio >= 5.0;
  return {pass, fmt("mucb R2 log %.3f lin %.3f; agnostic R2 log %.3f lin %.3f; R_T %.1f vs %.1f, ratio %.2f",
                    fm.log_fit.r_squared, fm.linear_fit.r_squared, fa.log_fit.r_squared, fa.linear_fit.r_squared,
                    mucb.mean.back(), agn.mean.back(), ratio)};
}

Outcome counterexample() {
  const auto est = estimate_lock_in_probability(1'000'000, 0);
  const bool a = est.p - 3.0 * est.std_error > 0.0;

  ExperimentSpec spec;
  spec.algorithm = Algorithm::Mucb;
  spec.problem = {Variant::BPrime, RewardModel::Iid};
  spec.environment = std::make_shared<CounterexampleEnv>(build_counterexample());
  spec.horizon = 2000;
  spec.runs = 10000;
  spec.grid = {2000};
  spec.record_trace = true;
  const auto r = run_experiment(spec);
  track(r);
  const auto bad = static_cast<std::uint32_t>(spec.environment->space().flat_index({2, 2}));
  std::uint64_t locked = 0;
  for (const auto& l : r.ledgers) {
    const auto& tr = l.joint_trace();
    if (std::all_of(tr.end() - 1000, tr.end(), [&](std::uint32_t f) { return f == bad; })) ++locked;
  }
  const double frac = static_cast<double>(locked) / 10000.0;
  // Standard error of a 10 000-run fraction at p-hat, or of p-hat itself, whichever is wider.
  const double se = std::max(est.std_error, std::sqrt(est.p * (1.0 - est.p) / 10000.0));
  const bool b = std::abs(frac - est.p) <= 5.0 * se;
  const double floor_c = 0.8 * est.p * 0.6 * (2000.0 - 4.0);
  const bool c = r.mean[0] >= floor_c;
  return {a && b && c, fmt("(a) p_hat %.5f sigma %.5f %s; (b) lock fraction %.4f vs %.4f +/- %.4f %s; "
                           "(c) mean regret %.1f >= %.1f %s",
                           est.p, est.std_error, a ? "ok" : "FAIL", frac, est.p, 5.0 * se, b ? "ok" : "FAIL",
                           r.mean[0], floor_c, c ? "ok" : "FAIL")};
}

Outcome mdsee_near_log() {
  const auto cfg = shipped("three_player_mdsee.json");
  auto spec = to_experiment_spec(cfg);
  spec.grid = {1000, 10000, 100000};
  // Runs are replayed by hand so the players' final commitments can be inspected.
  const auto& env = *spec.environment;
  std::vector<double> sum(3, 0.0);
  int optimal = 0;
  for (std::uint64_t r = 0; r < spec.runs; ++r) {
    auto e = env.clone();
    const auto players = make_players(spec.algorithm, e->space(), spec.k_schedule, spec.seed + r);
    EpisodeOptions opt{.horizon = spec.horizon, .seed = spec.seed + r, .grid = spec.grid};
    const auto ledger = run_episode(*e, spec.problem, players, opt);
    worst_residual = std::max(worst_residual, ledger.max_decomposition_residual());
    for (std::size_t k = 0; k < 3; ++k) sum[k] += ledger.checkpoints()[k].pseudo_regret;
    bool all = true;
    for (const auto& p : players) {
      const auto c = dynamic_cast<const DseePlayer&>(*p).committed();
      all = all && c && e->space().flat_index(*c) == e->optimal_flat();
    }
    optimal += all;
  }
  std::vector<double> q(3);
  for (std::size_t k = 0; k < 3; ++k) {
    const double l = std::log(static_cast<double>(spec.grid[k]));
    q[k] = sum[k] / static_cast<double>(spec.runs) / (l * l);
  }
  const double ratio = *std::max_element(q.begin(), q.end()) / *std::min_element(q.begin(), q.end());
  const bool pass = ratio <= 3.0 && optimal >= 9;
  return {pass, fmt("R/ln^2 t = %.3f %.3f %.3f, max/min %.3f; optimal commit in %d/10 runs", q[0], q[1], q[2], ratio,
                    optimal)};
}

Outcome markov_sublinear() {
  auto spec = to_experiment_spec(shipped("markov_mucb.json"));
  spec.grid = {10000, 100000};
  double min_gap = 1.0;
  for (double g : spec.environment->gaps())
    if (g > 0) min_gap = std::min(min_gap, g);
  const auto r = run_experiment(spec);
  track(r);
  const double early = r.mean[0] / 1e4, late = r.mean[1] / 1e5;
  const bool pass = min_gap >= 0.1 && late <= 0.5 * early;
  return {pass, fmt("min gap %.3f; R(1e4)/1e4 %.5f, R(1e5)/1e5 %.5f, ratio %.3f", min_gap, early, late, late / early)};
}

Outcome decomposition() {
  return {worst_residual <= kDecompositionTolerance, fmt("max residual %.3g over all runs above", worst_residual)};
}

Outcome k_divergence() {
  auto first_over_50 = [](const KSchedule& k) -> std::uint64_t {
    double sum = 0.0;
    for (std::uint64_t l = 1; l <= 10000; ++l) {
      sum += static_cast<double>(k(l));
      if (sum / static_cast<double>(l) > 50.0) return l;
    }
    return 0;
  };
  auto average = [](const KSchedule& k) {
    double sum = 0.0;
    for (std::uint64_t l = 1; l <= 10000; ++l) sum += static_cast<double>(k(l));
    return sum / 10000.0;
  };
  const auto li = first_over_50(KSchedule::identity());
  const auto ll = first_over_50(KSchedule::ceil_log2());
  return {li != 0 && ll != 0,
          fmt("identity exceeds 50 at L=%llu; ceil_log2 %s (average at L=1e4 is %.3f)", static_cast<unsigned long long>(li),
              ll ? ("exceeds 50 at L=" + std::to_string(ll)).c_str() : "never exceeds 50 for L <= 1e4",
              average(KSchedule::ceil_log2()))};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "mpbandit_acceptance";
  std::filesystem::create_directories(dir);
  int identical = 0, total = 0;
  for (const char* file : {"three_player_mucb.json", "three_player_mdsee.json", "counterexample.json", "markov_mucb.json"}) {
    const auto spec = to_experiment_spec(shipped(file));
    emit_csv(run_experiment(spec), dir / "first.csv");
    emit_csv(run_experiment(spec), dir / "second.csv");
    const auto a = slurp(dir / "first.csv"), b = slurp(dir / "second.csv");
    identical += !a.empty() && a == b;
    ++total;
  }
  std::filesystem::remove_all(dir);
  return {identical == total, fmt("%d/%d configs byte-identical on re-run", identical, total)};
}

}  // namespace

int main() {
  std::printf("mpbandit %s acceptance (kernel: %s)\n", kVersion,
              std::string(kernels::isa_name(kernels::active_isa())).c_str());
  report(1, "exploration schedule", 1.0, schedule_correctness);
  report(2, "gap-dependent bound dominance", 120.0, bound_dominance);
  report(3, "coordination invariant", 0.0, coordination);
  report(4, "log vs linear growth", 60.0, log_vs_linear);
  report(5, "lock-in counterexample", 120.0, counterexample);
  report(6, "mDSEE near-log regret", 60.0, mdsee_near_log);
  report(7, "markov sublinearity", 60.0, markov_sublinear);
  report(8, "regret decomposition", 0.0, decomposition);
  report(9, "K(lambda) phase-average", 0.0, k_divergence);
  report(10, "determinism", 0.0, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
