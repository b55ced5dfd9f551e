#include "mpbandit/output.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "mpbandit/errors.hpp"

namespace mpbandit {

std::string format_number(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw InvalidInput("cannot format number");
  return std::string(buf.data(), end);
}

std::string format_csv(const ExperimentResult& result) {
  if (result.runs() == 0 || result.grid.empty()) throw InvalidInput("experiment result is empty");
  const std::string prefix = std::string(to_string(result.algorithm)) + "," + std::string(to_string(result.variant)) + ",";
  std::string out = "algorithm,variant,run,seed,t,pseudo_regret\n";
  for (std::size_t r = 0; r < result.runs(); ++r) {
    const std::string run_prefix = prefix + std::to_string(r) + "," + std::to_string(result.seeds[r]) + ",";
    for (std::size_t c = 0; c < result.grid.size(); ++c) {
      out += run_prefix;
      out += std::to_string(result.grid[c]);
      out += ',';
      out += format_number(result.at(r, c));
      out += '\n';
    }
  }
  const std::string agg_prefix = prefix + "AGG," + std::to_string(result.seeds.front()) + ",";
  for (std::size_t c = 0; c < result.grid.size(); ++c) {
    out += agg_prefix;
    out += std::to_string(result.grid[c]);
    out += ',';
    out += format_number(result.mean[c]);
    out += ',';
    out += format_number(result.stddev[c]);
    out += '\n';
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path) {
  write_file(path, format_csv(result));
}

nlohmann::json experiment_metadata(const ExperimentConfig& config, const Environment& env) {
  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["config"] = to_json(config);
  meta["regret"] = "pseudo-regret: running sum of the gap of the joint action played each round";
  nlohmann::json arms = nlohmann::json::array();
  const ArmSpace& space = env.space();
  for (std::size_t k = 0; k < space.size(); ++k) {
    const ArmTuple a = space.tuple_at(k);
    arms.push_back({{"tuple", std::vector<int>(a.components().begin(), a.components().end())},
                    {"mean", env.means()[k]},
                    {"gap", env.gaps()[k]}});
  }
  meta["environment"] = {{"mu_star", env.mu_star()}, {"arms", std::move(arms)}};
  return meta;
}

std::filesystem::path metadata_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".meta.json");
}

void write_metadata(const ExperimentConfig& config, const Environment& env, const std::filesystem::path& csv_path) {
  write_file(metadata_path(csv_path), experiment_metadata(config, env).dump(2) + "\n");
}

}  // namespace mpbandit
