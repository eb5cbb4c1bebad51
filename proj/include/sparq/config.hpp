#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparq/kernel.hpp"
#include "sparq/policy.hpp"

namespace sparq {

/// Environment variable that relocates every experiment's output directory.
inline constexpr const char* kOutputRootEnv = "SPARQ_OUTPUT_ROOT";

struct EnvironmentConfig {
    std::string type = "synthetic";  ///< synthetic | brownian | grid_series
    double lo = -50.0;
    double hi = 50.0;
    int n_centers = 20;
    double rkhs_bound = 5.0;
    double time_freq = 0.3;
    double sigma_sq = 0.1;
    /// brownian only: "rkhs" starts from the synthetic function at t = 0, "zero" from 0.
    std::string initial = "rkhs";
    /// grid_series only; relative paths resolve against the config file.
    std::string path;
};

struct PolicySpec {
    std::string name;
    PolicyConfig config;
};

struct ExperimentConfig {
    std::string name = "experiment";
    long horizon = 100;
    int seeds = 1;
    std::uint64_t seed_base = 1;
    std::string output_dir = "results";
    /// Worker threads over (policy, seed) pairs; 0 uses the OpenMP default.
    int parallelism = 0;
    int grid_size = 500;
    bool record_prediction_error = false;
    bool plot = true;
    KernelSpec kernel{0.5, 3.0, 1};
    EnvironmentConfig environment;
    std::vector<PolicySpec> policies;

    /// The document this config was parsed from, after any overrides.
    nlohmann::json source;
    std::filesystem::path base_dir;

    /// Throws ConfigError.
    void validate() const;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// output_dir, placed under $SPARQ_OUTPUT_ROOT when that is set.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

/// Sets the value at a dotted path ("policies.1.window"); array indices are
/// numeric segments. Throws ConfigError if an intermediate node is missing.
void set_dotted(nlohmann::json& doc, const std::string& dotted, const nlohmann::json& value);

/// Parses "key=v1,v2,...". Values are read as JSON where possible, else as strings.
struct SweepParam {
    std::string key;
    std::vector<nlohmann::json> values;
};
SweepParam parse_sweep_param(const std::string& spec);

/// Cartesian product of the sweep values, first parameter varying slowest.
std::vector<std::vector<nlohmann::json>> sweep_grid(const std::vector<SweepParam>& params);

}  // namespace sparq
