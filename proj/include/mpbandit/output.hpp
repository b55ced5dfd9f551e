#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mpbandit/config.hpp"
#include "mpbandit/environments.hpp"
#include "mpbandit/simulator.hpp"

namespace mpbandit {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal that parses back to exactly `value`.
std::string format_number(double value);

/// CSV text: header `algorithm,variant,run,seed,t,pseudo_regret`, one row per
/// run per checkpoint, then one `algorithm,variant,AGG,seed0,t,mean,std` row
/// per checkpoint.
std::string format_csv(const ExperimentResult& result);

/// Writes format_csv(result) to `path`. Throws IoError if it cannot.
void emit_csv(const ExperimentResult& result, const std::filesystem::path& path);

/// Config echo, version, and the environment's means and gaps.
nlohmann::json experiment_metadata(const ExperimentConfig& config, const Environment& env);

/// `<csv path>.meta.json`
std::filesystem::path metadata_path(const std::filesystem::path& csv_path);
void write_metadata(const ExperimentConfig& config, const Environment& env, const std::filesystem::path& csv_path);

}  // namespace mpbandit
