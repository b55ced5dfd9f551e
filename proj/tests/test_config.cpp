#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mpbandit/config.hpp"
#include "mpbandit/errors.hpp"
#include "mpbandit/output.hpp"

using namespace mpbandit;

namespace {

const std::string kConfigDir = std::string(MPBANDIT_SOURCE_DIR) + "/configs/";

std::string error_of(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("shipped configs load") {
  const auto c = load_config(kConfigDir + "three_player_mucb.json");
  CHECK(c.horizon == 100000);
  CHECK(c.runs == 10);
  CHECK(c.arm_counts == std::vector<int>{2, 2, 2});
  CHECK(c.algorithm == Algorithm::Mucb);
  CHECK(c.variant == Variant::A);

  for (const char* name : {"three_player_agnostic.json", "three_player_mdsee.json", "counterexample.json", "markov_mucb.json",
                           "small_gaussian.json"}) {
    CAPTURE(name);
    const auto cfg = load_config(kConfigDir + name);
    CHECK_NOTHROW(build_environment(cfg));
  }
  const auto markov = build_environment(load_config(kConfigDir + "markov_mucb.json"));
  CHECK(markov->means()[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(load_config(kConfigDir + "missing.json"), IoError);
}

TEST_CASE("validation messages") {
  const std::string base = R"("algorithm": "mucb", "variant": "A", "arm_counts": [2, 2], "environment": {"kind": "random"})";
  CHECK(error_of("{" + base + R"(, "runs": 0})").find("runs must be ≥ 1") != std::string::npos);
  CHECK(error_of("{" + base + R"(, "run": 3})").find("'run'") != std::string::npos);
  CHECK(error_of(R"({"algorithm": "mucb", "variant": "A", "arm_counts": [2, 2], "environment": {"kind": "random", "sed": 1}})")
            .find("environment.sed") != std::string::npos);
  CHECK(error_of("{" + base + R"(, "horizon": -5})").find("horizon") != std::string::npos);
  CHECK(error_of("{" + base + R"(, "checkpoint_grid": [5, 3]})").find("checkpoint_grid") != std::string::npos);
  CHECK(error_of("not json").find("JSON") != std::string::npos);
  CHECK(error_of(R"({"algorithm": "mucb", "variant": "C", "arm_counts": [2], "environment": {"kind": "random"}})")
            .find("variant") != std::string::npos);
}

TEST_CASE("compatibility table") {
  const std::string b = R"({"algorithm": "mucb", "variant": "B", "arm_counts": [2, 2], "environment": {"kind": "random"})";
  CHECK(error_of(b + "}").find("allow_negative_result") != std::string::npos);
  CHECK(error_of(b + R"(, "allow_negative_result": true})").empty());

  const std::string markov_b =
      R"({"algorithm": "mdsee", "variant": "B", "reward_model": "markov", "arm_counts": [1],
          "environment": {"kind": "explicit", "arms": [{"tuple": [1], "dist": "markov", "rewards": [0, 1],
          "transition": [[0.5, 0.5], [0.5, 0.5]]}]}})";
  CHECK(error_of(markov_b).find("variant A") != std::string::npos);

  CHECK_FALSE(error_of(R"({"algorithm": "mucb", "variant": "A", "environment": {"kind": "counterexample"}})").empty());
  CHECK_FALSE(error_of(R"({"algorithm": "mucb", "variant": "B_prime", "arm_counts": [2, 3],
                           "environment": {"kind": "counterexample"}})").empty());
  const auto c = parse_config(R"({"algorithm": "mucb", "variant": "B_prime", "environment": {"kind": "counterexample"}})");
  CHECK(c.arm_counts == std::vector<int>{2, 2});
  CHECK(dynamic_cast<const CounterexampleEnv*>(build_environment(c).get()) != nullptr);
}

TEST_CASE("explicit environment checks") {
  const std::string head = R"({"algorithm": "mucb", "variant": "A", "arm_counts": [2], "environment": {"kind": "explicit", "arms": )";
  CHECK(error_of(head + R"([{"tuple": [1], "dist": "gaussian", "mean": 0.5, "std": 0.1}]}})").find("every tuple") != std::string::npos);
  CHECK(error_of(head + R"([{"tuple": [1], "dist": "gaussian", "mean": 0.5, "std": 0.1},
                            {"tuple": [1], "dist": "gaussian", "mean": 0.5, "std": 0.1}]}})").find("twice") != std::string::npos);
  CHECK(error_of(head + R"([{"tuple": [1], "dist": "gaussian", "mean": 0.5, "std": 0.1},
                            {"tuple": [3], "dist": "gaussian", "mean": 0.5, "std": 0.1}]}})").find("arms[1].tuple") != std::string::npos);
  CHECK(error_of(head + R"([{"tuple": [1], "dist": "gaussian", "mean": 0.5},
                            {"tuple": [2], "dist": "gaussian", "mean": 0.5, "std": 0.1}]}})").find("std") != std::string::npos);
  CHECK(error_of(head + R"([{"tuple": [1], "dist": "gaussian", "mean": 0.5, "std": 0.1, "extra": 1},
                            {"tuple": [2], "dist": "gaussian", "mean": 0.5, "std": 0.1}]}})").find("extra") != std::string::npos);
}

TEST_CASE("to_json round trip") {
  for (const char* name : {"three_player_mucb.json", "three_player_mdsee.json", "counterexample.json", "markov_mucb.json",
                           "small_gaussian.json"}) {
    CAPTURE(name);
    const auto c = load_config(kConfigDir + name);
    CHECK(parse_config(to_json(c).dump()) == c);
  }
  ExperimentConfig tuned;
  tuned.k_schedule = KSchedule::table({1, 2, 5});
  tuned.checkpoint_grid = std::vector<std::uint64_t>{1, 10, 100};
  tuned.horizon = 100;
  tuned.seed = 18446744073709551615ULL;
  tuned.environment.random.std_range = {0.01, 0.02};
  CHECK(parse_config(to_json(tuned).dump()) == tuned);

  const auto env = build_environment(tuned);
  const auto meta = experiment_metadata(tuned, *env);
  CHECK(parse_config(meta["config"].dump()) == tuned);
  CHECK(meta["version"] == kVersion);
  double min_gap = 1.0;
  for (const auto& arm : meta["environment"]["arms"]) min_gap = std::min(min_gap, arm["gap"].get<double>());
  CHECK(min_gap == 0.0);
}

TEST_CASE("random environment depends only on its own seed") {
  auto c = load_config(kConfigDir + "three_player_mucb.json");
  const auto a = build_environment(c);
  c.seed = 99;
  c.runs = 1;
  const auto b = build_environment(c);
  CHECK(a->means() == b->means());
  c.environment.random.seed = 1;
  CHECK(build_environment(c)->means() != a->means());
}

TEST_CASE("csv output") {
  auto c = load_config(kConfigDir + "small_gaussian.json");
  c.runs = 1;
  c.checkpoint_grid = std::vector<std::uint64_t>{10, 100, 1000};
  c.horizon = 1000;
  const auto r = run_experiment(to_experiment_spec(c));
  const std::string csv = format_csv(r);
  CHECK(count_lines(csv) == 1 + 3 + 3);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "algorithm,variant,run,seed,t,pseudo_regret");
  std::getline(in, line);
  CHECK(line.rfind("mucb,A,0,7,10,", 0) == 0);
  for (int k = 0; k < 3; ++k) std::getline(in, line);
  CHECK(line.rfind("mucb,A,AGG,7,10,", 0) == 0);
  CHECK(line.substr(line.size() - 2) == ",0");

  const auto ten = load_config(kConfigDir + "small_gaussian.json");
  const auto r3 = run_experiment(to_experiment_spec(ten));
  CHECK(count_lines(format_csv(r3)) == 1 + 3 * 4 + 4);
  CHECK(format_csv(run_experiment(to_experiment_spec(ten))) == format_csv(r3));

  const auto dir = std::filesystem::temp_directory_path() / "mpbandit_test_csv";
  std::filesystem::create_directories(dir);
  emit_csv(r3, dir / "out.csv");
  std::ifstream back(dir / "out.csv", std::ios::binary);
  std::stringstream buf;
  buf << back.rdbuf();
  CHECK(buf.str() == format_csv(r3));
  CHECK_THROWS_AS(emit_csv(r3, dir / "no_such_dir" / "out.csv"), IoError);
  CHECK(metadata_path("a/b.csv") == std::filesystem::path("a/b.csv.meta.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 10000; ++k) {
    const double x = k % 2 ? u(rng) : u(rng) * 1e-9;
    const std::string s = format_number(x);
    double y = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), y);
    CHECK(y == x);
  }
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1031.5) == "1031.5");
}
