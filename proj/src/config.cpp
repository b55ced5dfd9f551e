#include "mpbandit/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mpbandit/errors.hpp"

namespace mpbandit {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> known) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

const json& require_object(const json& j, const std::string& key) {
  if (!j.is_object()) fail(key, "expected an object");
  return j;
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) fail(key, "expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) fail(key, "expected a number");
  return j.get<double>();
}

std::uint64_t get_unsigned(const json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) fail(key, "must be non-negative");
  fail(key, "expected a non-negative integer");
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) fail(key, "expected true or false");
  return j.get<bool>();
}

std::pair<double, double> get_range(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) fail(key, "expected [low, high]");
  return {get_number(j[0], key), get_number(j[1], key)};
}

std::vector<double> get_numbers(const json& j, const std::string& key) {
  if (!j.is_array()) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_number(v, key));
  return out;
}

std::vector<int> get_ints(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) fail(key, "expected a non-empty array of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) fail(key, "expected integers");
    const auto x = v.get<std::int64_t>();
    if (x < 1 || x > 1'000'000) fail(key, "entries must be >= 1");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

template <typename Fn>
auto wrap(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidInput& e) {
    fail(key, e.what());
  }
}

ExplicitArmConfig parse_arm(const json& j, const std::string& where) {
  require_object(j, where);
  if (!j.contains("tuple")) fail(where + ".tuple", "missing");
  if (!j.contains("dist")) fail(where + ".dist", "missing");
  const std::string dist = get_string(j["dist"], where + ".dist");
  ExplicitArmConfig arm;
  arm.tuple = ArmTuple(get_ints(j["tuple"], where + ".tuple"));
  auto need = [&](const char* k) -> const json& {
    if (!j.contains(k)) fail(where + "." + k, "missing for dist '" + dist + "'");
    return j[k];
  };
  if (dist == "gaussian") {
    reject_unknown(j, where, {"tuple", "dist", "mean", "std"});
    arm.model = Gaussian{get_number(need("mean"), where + ".mean"), get_number(need("std"), where + ".std")};
  } else if (dist == "uniform") {
    reject_unknown(j, where, {"tuple", "dist", "center", "half_width"});
    arm.model = Uniform{get_number(need("center"), where + ".center"),
                        get_number(need("half_width"), where + ".half_width")};
  } else if (dist == "markov") {
    reject_unknown(j, where, {"tuple", "dist", "rewards", "transition", "initial_state_index"});
    MarkovChainSpec chain;
    chain.rewards = get_numbers(need("rewards"), where + ".rewards");
    const json& rows = need("transition");
    if (!rows.is_array()) fail(where + ".transition", "expected an array of rows");
    for (const auto& row : rows) chain.transition.push_back(get_numbers(row, where + ".transition"));
    if (j.contains("initial_state_index")) {
      chain.initial_state = get_unsigned(j["initial_state_index"], where + ".initial_state_index");
    }
    arm.model = std::move(chain);
  } else {
    fail(where + ".dist", "expected gaussian, uniform or markov, got '" + dist + "'");
  }
  return arm;
}

EnvironmentConfig parse_environment(const json& j) {
  require_object(j, "environment");
  if (!j.contains("kind")) fail("environment.kind", "missing");
  const std::string kind = get_string(j["kind"], "environment.kind");
  EnvironmentConfig env;
  if (kind == "random") {
    reject_unknown(j, "environment", {"kind", "mean_range", "std_range", "seed"});
    env.kind = EnvironmentConfig::Kind::Random;
    if (j.contains("mean_range")) env.random.mean_range = get_range(j["mean_range"], "environment.mean_range");
    if (j.contains("std_range")) env.random.std_range = get_range(j["std_range"], "environment.std_range");
    if (j.contains("seed")) env.random.seed = get_unsigned(j["seed"], "environment.seed");
  } else if (kind == "explicit") {
    reject_unknown(j, "environment", {"kind", "arms"});
    env.kind = EnvironmentConfig::Kind::Explicit;
    if (!j.contains("arms") || !j["arms"].is_array()) fail("environment.arms", "expected an array");
    for (std::size_t k = 0; k < j["arms"].size(); ++k) {
      env.arms.push_back(parse_arm(j["arms"][k], "environment.arms[" + std::to_string(k) + "]"));
    }
  } else if (kind == "counterexample") {
    reject_unknown(j, "environment", {"kind"});
    env.kind = EnvironmentConfig::Kind::Counterexample;
  } else {
    fail("environment.kind", "expected random, explicit or counterexample, got '" + kind + "'");
  }
  return env;
}

KSchedule parse_k_schedule(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "identity") return KSchedule::identity();
    if (s == "ceil_log2") return KSchedule::ceil_log2();
    fail("k_schedule", "expected identity, ceil_log2 or {\"table\": [...]}, got '" + s + "'");
  }
  if (j.is_object()) {
    reject_unknown(j, "k_schedule", {"table"});
    if (!j.contains("table") || !j["table"].is_array()) fail("k_schedule.table", "expected an array");
    std::vector<std::uint64_t> values;
    for (const auto& v : j["table"]) values.push_back(get_unsigned(v, "k_schedule.table"));
    return wrap("k_schedule.table", [&] { return KSchedule::table(std::move(values)); });
  }
  fail("k_schedule", "expected a string or an object");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, "", {"algorithm", "variant", "reward_model", "arm_counts", "horizon", "runs", "seed",
                         "environment", "k_schedule", "checkpoint_grid", "output_path",
                         "allow_negative_result"});

  ExperimentConfig c;
  if (!j.contains("algorithm")) fail("algorithm", "missing");
  c.algorithm = wrap("algorithm", [&] { return parse_algorithm(get_string(j["algorithm"], "algorithm")); });
  if (!j.contains("variant")) fail("variant", "missing");
  c.variant = wrap("variant", [&] { return parse_variant(get_string(j["variant"], "variant")); });
  if (j.contains("reward_model")) {
    c.reward_model =
        wrap("reward_model", [&] { return parse_reward_model(get_string(j["reward_model"], "reward_model")); });
  }
  if (!j.contains("environment")) fail("environment", "missing");
  c.environment = parse_environment(j["environment"]);
  if (j.contains("arm_counts")) {
    c.arm_counts = get_ints(j["arm_counts"], "arm_counts");
  } else if (c.environment.kind == EnvironmentConfig::Kind::Counterexample) {
    c.arm_counts = {2, 2};
  } else {
    fail("arm_counts", "missing");
  }
  if (j.contains("horizon")) c.horizon = get_unsigned(j["horizon"], "horizon");
  if (j.contains("runs")) c.runs = get_unsigned(j["runs"], "runs");
  if (j.contains("seed")) c.seed = get_unsigned(j["seed"], "seed");
  if (j.contains("k_schedule")) c.k_schedule = parse_k_schedule(j["k_schedule"]);
  if (j.contains("checkpoint_grid")) {
    const json& g = j["checkpoint_grid"];
    if (g.is_string()) {
      if (g.get<std::string>() != "default") fail("checkpoint_grid", "expected \"default\" or a list of rounds");
    } else if (g.is_array()) {
      std::vector<std::uint64_t> grid;
      for (const auto& v : g) grid.push_back(get_unsigned(v, "checkpoint_grid"));
      c.checkpoint_grid = std::move(grid);
    } else {
      fail("checkpoint_grid", "expected \"default\" or a list of rounds");
    }
  }
  if (j.contains("output_path")) c.output_path = get_string(j["output_path"], "output_path");
  if (j.contains("allow_negative_result")) {
    c.allow_negative_result = get_bool(j["allow_negative_result"], "allow_negative_result");
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& c) {
  if (c.runs < 1) throw ConfigError("config key 'runs': runs must be ≥ 1");
  if (c.horizon < 1) throw ConfigError("config key 'horizon': horizon must be ≥ 1");
  if (c.arm_counts.empty()) fail("arm_counts", "needs at least one player");
  for (int k : c.arm_counts) {
    if (k < 1) fail("arm_counts", "entries must be >= 1");
  }

  try {
    check_compatibility(c.algorithm, ProblemVariant{c.variant, c.reward_model}, c.allow_negative_result);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config keys 'algorithm'/'variant'/'reward_model': ") + e.what());
  }

  using Kind = EnvironmentConfig::Kind;
  switch (c.environment.kind) {
    case Kind::Counterexample:
      if (c.arm_counts != std::vector<int>{2, 2}) fail("arm_counts", "the counterexample environment is fixed to [2, 2]");
      if (c.variant != Variant::BPrime) fail("variant", "the counterexample environment requires variant B_prime");
      if (c.reward_model != RewardModel::Iid) fail("reward_model", "the counterexample environment is iid");
      break;
    case Kind::Random: {
      const auto& r = c.environment.random;
      if (!(r.mean_range.first <= r.mean_range.second)) fail("environment.mean_range", "low must not exceed high");
      if (!(r.std_range.first >= 0.0 && r.std_range.first <= r.std_range.second)) {
        fail("environment.std_range", "need 0 <= low <= high");
      }
      if (c.reward_model != RewardModel::Iid) {
        fail("environment.kind", "markov rewards need an explicit environment");
      }
      break;
    }
    case Kind::Explicit: {
      const ArmSpace space = wrap("arm_counts", [&] { return ArmSpace(c.arm_counts); });
      std::set<std::size_t> seen;
      for (std::size_t k = 0; k < c.environment.arms.size(); ++k) {
        const std::string where = "environment.arms[" + std::to_string(k) + "]";
        const auto& arm = c.environment.arms[k];
        if (!space.contains(arm.tuple)) fail(where + ".tuple", arm.tuple.to_string() + " is not in the arm space");
        if (!seen.insert(space.flat_index(arm.tuple)).second) fail(where + ".tuple", "listed twice");
        const bool markov = std::holds_alternative<MarkovChainSpec>(arm.model);
        if (markov != (c.reward_model == RewardModel::Markov)) {
          fail(where + ".dist", markov ? "markov arm in an iid config" : "iid arm in a markov config");
        }
      }
      if (seen.size() != space.size()) {
        fail("environment.arms", "every tuple needs exactly one entry (" + std::to_string(space.size()) +
                                     " expected, " + std::to_string(seen.size()) + " given)");
      }
      // Distribution-level checks (stochastic rows, widths) run in the constructors.
      wrap("environment", [&] { return build_environment(c); });
      break;
    }
  }

  if (c.checkpoint_grid) {
    const auto& g = *c.checkpoint_grid;
    if (g.empty()) fail("checkpoint_grid", "must not be empty");
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g[k] < 1 || g[k] > c.horizon) fail("checkpoint_grid", "rounds must lie in [1, horizon]");
      if (k > 0 && g[k] <= g[k - 1]) fail("checkpoint_grid", "rounds must be strictly increasing");
    }
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json j;
  j["algorithm"] = std::string(to_string(c.algorithm));
  j["variant"] = std::string(to_string(c.variant));
  j["reward_model"] = std::string(to_string(c.reward_model));
  j["arm_counts"] = c.arm_counts;
  j["horizon"] = c.horizon;
  j["runs"] = c.runs;
  j["seed"] = c.seed;

  json env;
  switch (c.environment.kind) {
    case EnvironmentConfig::Kind::Random:
      env["kind"] = "random";
      env["mean_range"] = {c.environment.random.mean_range.first, c.environment.random.mean_range.second};
      env["std_range"] = {c.environment.random.std_range.first, c.environment.random.std_range.second};
      env["seed"] = c.environment.random.seed;
      break;
    case EnvironmentConfig::Kind::Counterexample:
      env["kind"] = "counterexample";
      break;
    case EnvironmentConfig::Kind::Explicit: {
      env["kind"] = "explicit";
      env["arms"] = json::array();
      for (const auto& arm : c.environment.arms) {
        json a;
        a["tuple"] = std::vector<int>(arm.tuple.components().begin(), arm.tuple.components().end());
        if (const auto* g = std::get_if<Gaussian>(&arm.model)) {
          a["dist"] = "gaussian";
          a["mean"] = g->mean;
          a["std"] = g->std;
        } else if (const auto* u = std::get_if<Uniform>(&arm.model)) {
          a["dist"] = "uniform";
          a["center"] = u->center;
          a["half_width"] = u->half_width;
        } else {
          const auto& m = std::get<MarkovChainSpec>(arm.model);
          a["dist"] = "markov";
          a["rewards"] = m.rewards;
          a["transition"] = m.transition;
          a["initial_state_index"] = m.initial_state;
        }
        env["arms"].push_back(std::move(a));
      }
      break;
    }
  }
  j["environment"] = std::move(env);

  switch (c.k_schedule.kind()) {
    case KSchedule::Kind::Identity:
      j["k_schedule"] = "identity";
      break;
    case KSchedule::Kind::CeilLog2:
      j["k_schedule"] = "ceil_log2";
      break;
    case KSchedule::Kind::Table:
      j["k_schedule"] = {{"table", c.k_schedule.values()}};
      break;
  }
  if (c.checkpoint_grid) {
    j["checkpoint_grid"] = *c.checkpoint_grid;
  } else {
    j["checkpoint_grid"] = "default";
  }
  j["output_path"] = c.output_path;
  j["allow_negative_result"] = c.allow_negative_result;
  return j;
}

std::shared_ptr<const Environment> build_environment(const ExperimentConfig& c) {
  const ArmSpace space(c.arm_counts);
  switch (c.environment.kind) {
    case EnvironmentConfig::Kind::Counterexample:
      return std::make_shared<CounterexampleEnv>();
    case EnvironmentConfig::Kind::Random:
      return std::make_shared<IidEnv>(random_gaussian_env(space, c.environment.random.mean_range,
                                                          c.environment.random.std_range, c.environment.random.seed));
    case EnvironmentConfig::Kind::Explicit:
      break;
  }
  if (c.reward_model == RewardModel::Markov) {
    std::vector<MarkovChainSpec> chains(space.size());
    for (const auto& arm : c.environment.arms) chains[space.flat_index(arm.tuple)] = std::get<MarkovChainSpec>(arm.model);
    return std::make_shared<MarkovEnv>(space, std::move(chains));
  }
  std::vector<RewardDistribution> dists(space.size(), Gaussian{0.0, 0.0});
  for (const auto& arm : c.environment.arms) {
    if (const auto* g = std::get_if<Gaussian>(&arm.model)) {
      dists[space.flat_index(arm.tuple)] = *g;
    } else {
      dists[space.flat_index(arm.tuple)] = std::get<Uniform>(arm.model);
    }
  }
  return std::make_shared<IidEnv>(space, std::move(dists));
}

ExperimentSpec to_experiment_spec(const ExperimentConfig& c) {
  validate(c);
  ExperimentSpec spec;
  spec.algorithm = c.algorithm;
  spec.problem = ProblemVariant{c.variant, c.reward_model};
  spec.environment = build_environment(c);
  spec.horizon = c.horizon;
  spec.runs = c.runs;
  spec.seed = c.seed;
  spec.k_schedule = c.k_schedule;
  if (c.checkpoint_grid) spec.grid = *c.checkpoint_grid;
  spec.allow_negative_result = c.allow_negative_result;
  return spec;
}

}  // namespace mpbandit
