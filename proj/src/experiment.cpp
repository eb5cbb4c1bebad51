#include "sparq/experiment.hpp"

#include <omp.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

#include "sparq/report.hpp"

namespace sparq {

namespace {

Points linspace_points(double lo, double hi, int n) {
    if (n == 1) return Points::Constant(1, 1, 0.5 * (lo + hi));
    return Points(Vector::LinSpaced(n, lo, hi));
}

SyntheticRkhsEnv synthetic_from(const ExperimentConfig& cfg) {
    const auto& e = cfg.environment;
    return SyntheticRkhsEnv::uniform_1d(e.lo, e.hi, e.n_centers, cfg.kernel, e.rkhs_bound, e.time_freq, e.sigma_sq);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

}  // namespace

std::unique_ptr<Environment> make_environment(const ExperimentConfig& cfg, std::uint64_t seed) {
    const auto& e = cfg.environment;
    if (e.type == "synthetic") return std::make_unique<SyntheticRkhsEnv>(synthetic_from(cfg));
    if (e.type == "brownian") {
        const Points grid = linspace_points(e.lo, e.hi, cfg.grid_size);
        const Vector initial = e.initial == "zero" ? Vector::Zero(grid.rows()) : synthetic_from(cfg).true_values(grid, 0);
        Rng drift = make_stream(seed, static_cast<std::uint64_t>(Stream::Drift));
        return std::make_unique<BrownianDriftEnv>(grid, initial, e.sigma_sq, cfg.horizon, drift);
    }
    if (e.type == "grid_series") {
        auto env = std::make_unique<GridSeriesEnv>(load_grid_series_csv(e.path, e.sigma_sq));
        if (env->max_time() < cfg.horizon)
            throw ConfigError("grid series has " + std::to_string(env->max_time()) + " timesteps, horizon is " +
                              std::to_string(cfg.horizon));
        return env;
    }
    throw ConfigError("unknown environment type '" + e.type + "'");
}

Points candidate_grid(const ExperimentConfig& cfg, const Environment& env) {
    if (const auto* b = dynamic_cast<const BrownianDriftEnv*>(&env)) return b->grid();
    if (const auto* g = dynamic_cast<const GridSeriesEnv*>(&env)) return g->grid();
    return linspace_points(cfg.environment.lo, cfg.environment.hi, cfg.grid_size);
}

RunResult run_single(const ExperimentConfig& cfg, std::size_t policy_index, std::uint64_t seed) {
    const PolicySpec& spec = cfg.policies.at(policy_index);
    RunResult res;
    res.policy = spec.name;
    res.variant = spec.config.variant;
    res.seed = seed;
    res.trace.policy = spec.name;
    res.trace.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        auto env = make_environment(cfg, seed);
        const Points grid = candidate_grid(cfg, *env);
        KernelSpec kernel = cfg.kernel;
        kernel.dim = env->dim();
        res.trace.dim = kernel.dim;

        Rng obs_rng = make_stream(seed, static_cast<std::uint64_t>(Stream::Observation));
        Rng expert_rng = make_stream(seed, static_cast<std::uint64_t>(Stream::Expert));
        Rng policy_rng = make_stream(seed, static_cast<std::uint64_t>(Stream::Policy));
        EnvironmentExpert expert(*env, expert_rng);
        Policy policy(spec.config, kernel, grid, cfg.horizon);
        if (cfg.record_prediction_error) res.sq_error_sum = Vector::Zero(grid.rows());

        Decision d = policy.first();
        res.trace.steps.reserve(static_cast<std::size_t>(cfg.horizon));
        for (long t = 1; t <= cfg.horizon; ++t) {
            const Vector f = env->true_values(grid, t);
            Eigen::Index best = 0;
            for (Eigen::Index i = 1; i < f.size(); ++i)
                if (f(i) > f(best)) best = i;
            const auto idx = static_cast<Eigen::Index>(d.index);
            const Vector x = grid.row(idx).transpose();

            StepRecord rec;
            rec.t = t;
            rec.x = x;
            rec.y = env->observe(x, t, obs_rng);
            rec.f_x = f(idx);
            rec.f_opt = f(best);
            rec.regret = rec.f_opt - rec.f_x;
            rec.beta = d.beta;
            if (cfg.record_prediction_error) res.sq_error_sum += (d.grid_mean - f).cwiseAbs2();

            d = policy.step(x, rec.y, expert, policy_rng);
            rec.queries = d.queries;
            res.trace.steps.push_back(std::move(rec));
        }
        res.env_queries = env->query_count();
        res.ok = true;
    } catch (const std::exception& e) {
        res.ok = false;
        res.error = e.what();
    }
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

nlohmann::json environment_diagnostics(const ExperimentConfig& cfg) {
    nlohmann::json j;
    const auto& e = cfg.environment;
    j["type"] = e.type;
    j["sigma_sq"] = e.sigma_sq;
    if (e.type == "synthetic" || e.type == "brownian") {
        const SyntheticRkhsEnv env = synthetic_from(cfg);
        double max_norm_sq = 0.0;
        for (long t = 0; t <= cfg.horizon; ++t) max_norm_sq = std::max(max_norm_sq, env.rkhs_norm_sq(t));
        j["lambda_max"] = env.lambda_max();
        j["lambda_max_below_one"] = env.lambda_max() < 1.0;
        j["rkhs_bound"] = e.rkhs_bound;
        j["norm_sq_guarantee"] = e.rkhs_bound * e.rkhs_bound / env.lambda_max();
        j["max_norm_sq_over_run"] = max_norm_sq;
        j["n_centers"] = e.n_centers;
    }
    if (e.type == "brownian") j["increment_variance"] = e.sigma_sq * e.sigma_sq / 3.0;
    if (e.type == "grid_series") {
        const GridSeriesEnv env = load_grid_series_csv(e.path, e.sigma_sq);
        j["grid_points"] = env.grid().rows();
        j["timesteps"] = env.max_time();
        j["dim"] = env.dim();
    }
    return j;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, bool write_outputs) {
    cfg.validate();
    ExperimentReport report;
    report.output_dir = resolve_output_dir(cfg);
    // Surface configuration problems (missing files, short series) before any work.
    make_environment(cfg, cfg.seed_base);

    const auto n_seeds = static_cast<std::size_t>(cfg.seeds);
    const auto n_runs = static_cast<long>(cfg.policies.size() * n_seeds);
    report.runs.resize(static_cast<std::size_t>(n_runs));
    const int threads = cfg.parallelism > 0 ? cfg.parallelism : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long k = 0; k < n_runs; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        report.runs[uk] = run_single(cfg, uk / n_seeds, cfg.seed_base + uk % n_seeds);
    }
    for (const auto& r : report.runs)
        if (!r.ok) ++report.failed;
    if (!write_outputs) return report;

    namespace fs = std::filesystem;
    const fs::path out = report.output_dir;
    fs::create_directories(out / "traces");
    for (const auto& r : report.runs) {
        if (!r.ok) {
            std::cerr << "warning: " << r.policy << " seed " << r.seed << " failed: " << r.error << "\n";
            continue;
        }
        write_trace_csv(r.trace, (out / "traces" / (r.policy + "_seed" + std::to_string(r.seed) + ".csv")).string());
    }
    write_summary_csv(report.runs, out / "summary.csv");

    std::map<std::string, CurveStats> curves;
    for (const auto& p : cfg.policies) {
        std::vector<std::vector<double>> cs;
        for (const auto& r : report.runs)
            if (r.ok && r.policy == p.name) cs.push_back(cumulative_regret(r.trace));
        if (!cs.empty()) curves[p.name] = curve_stats(cs);
    }
    write_curves_csv(curves, out / "regret_curves.csv");
    if (cfg.plot && !curves.empty()) write_svg_plot(curves, cfg.name + ": cumulative regret", out / "regret.svg");

    nlohmann::json snapshot = cfg.source;
    write_text(out / "config.json", snapshot.dump(2) + "\n");
    write_text(out / "env_diagnostics.json", environment_diagnostics(cfg).dump(2) + "\n");

    if (cfg.record_prediction_error) {
        fs::create_directories(out / "predictions");
        auto env = make_environment(cfg, cfg.seed_base);
        const Points grid = candidate_grid(cfg, *env);
        for (const auto& p : cfg.policies) {
            Vector total = Vector::Zero(grid.rows());
            std::size_t n = 0;
            for (const auto& r : report.runs)
                if (r.ok && r.policy == p.name) {
                    total += r.sq_error_sum;
                    ++n;
                }
            if (n == 0) continue;
            total /= static_cast<double>(n) * static_cast<double>(cfg.horizon);
            std::ofstream f(out / "predictions" / (p.name + ".csv"), std::ios::binary);
            f << "index";
            for (Eigen::Index k = 0; k < grid.cols(); ++k) f << ",x" << k + 1;
            f << ",mean_sq_error\n";
            for (Eigen::Index i = 0; i < grid.rows(); ++i) {
                f << i;
                for (Eigen::Index k = 0; k < grid.cols(); ++k) f << ',' << format_double(grid(i, k));
                f << ',' << format_double(total(i)) << '\n';
            }
        }
    }
    return report;
}

}  // namespace sparq
