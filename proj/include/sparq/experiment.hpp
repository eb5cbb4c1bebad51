#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "sparq/config.hpp"
#include "sparq/environment.hpp"
#include "sparq/trace.hpp"

namespace sparq {

/// Named rng streams of one seeded run.
enum class Stream : std::uint64_t { Observation = 1, Expert = 2, Policy = 3, Drift = 4 };

/// Environment for one seed. Every policy of an experiment sees the same
/// instance definition for a given seed.
std::unique_ptr<Environment> make_environment(const ExperimentConfig& cfg, std::uint64_t seed);

/// Candidate grid shared by policies and the regret evaluator.
Points candidate_grid(const ExperimentConfig& cfg, const Environment& env);

struct RunResult {
    std::string policy;
    Variant variant = Variant::GpUcb;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    RunTrace trace;
    double wall_time_s = 0.0;
    std::size_t env_queries = 0;
    /// Per grid point, sum over steps of (posterior mean - f_t)^2; empty unless requested.
    Vector sq_error_sum;
};

/// Runs one (policy, seed) pair to the horizon. Failures are reported in the
/// result, not thrown.
RunResult run_single(const ExperimentConfig& cfg, std::size_t policy_index, std::uint64_t seed);

struct ExperimentReport {
    std::filesystem::path output_dir;
    std::vector<RunResult> runs;  ///< policy-major, then seed
    std::size_t failed = 0;

    /// 0 when every run succeeded, 1 otherwise.
    int exit_code() const { return failed == 0 ? 0 : 1; }
};

/// Runs every (policy, seed) pair, in parallel when configured, and writes
/// traces, summary, regret curves, snapshots and optional plots.
ExperimentReport run_experiment(const ExperimentConfig& cfg, bool write_outputs = true);

/// Environment facts worth logging next to results (JSON object).
nlohmann::json environment_diagnostics(const ExperimentConfig& cfg);

}  // namespace sparq
