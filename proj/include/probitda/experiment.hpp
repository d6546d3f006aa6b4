#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "probitda/diagnostics.hpp"
#include "probitda/model.hpp"
#include "probitda/samplers.hpp"

namespace probitda::cli {

/// One experiment: data + prior + sampler settings + output location.
struct RunConfig {
  std::filesystem::path data_path;
  bool add_intercept = false;
  PriorSpec prior;
  SamplerConfig sampler;
  std::optional<Eigen::VectorXd> init_beta;  // defaults to the zero vector
  std::filesystem::path output_dir;
  int chains = 1;
};

/// Parses the config JSON; relative paths resolve against base_dir.
RunConfig parse_run_config(const nlohmann::json& j,
                           const std::filesystem::path& base_dir);

RunConfig load_run_config(const std::filesystem::path& config_path);

/// Runs `chains` independent chains (seeds seed, seed+1, ...) and writes
/// samples_<k>.csv, diagnostics_<k>.json and meta.json to output_dir.
void run_command(const RunConfig& cfg);

/// Drift constants, trace-class verdict and propriety check as one JSON
/// document; drift/trace sections are null under the flat prior.
nlohmann::json theory_json(const ProbitData& data, const PriorSpec& prior);

/// Writes theory.json to output_dir and echoes it on stdout.
void check_command(const RunConfig& cfg);

/// Loads >= 2 completed run directories and writes comparison tables
/// (compare/comparison.json plus per-coordinate ACF and running-mean CSVs)
/// under out_dir.
void compare_command(const std::vector<std::filesystem::path>& run_dirs,
                     const std::filesystem::path& out_dir, int max_lag = 50);

nlohmann::json diagnostics_json(const DiagnosticsReport& rep);

/// Full argv entry point; returns the process exit code
/// (0 ok, 2 validation, 3 numeric, 4 I/O).
int dispatch(int argc, const char* const* argv);

}  // namespace probitda::cli
