// Experiment driver: run, sweep, analyze, adversary, validate.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "sparq/adversary.hpp"
#include "sparq/analysis.hpp"
#include "sparq/config.hpp"
#include "sparq/experiment.hpp"
#include "sparq/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kConfigError = 2;

void print_run(const sparq::ExperimentReport& r) {
    std::cout << "output: " << r.output_dir.string() << "\n";
    std::cout << "runs: " << r.runs.size() << ", failed: " << r.failed << "\n";
    for (const auto& run : r.runs) {
        if (!run.ok) continue;
        double regret = 0.0;
        for (const auto& s : run.trace.steps) regret += s.regret;
        std::cout << "  " << run.policy << " seed " << run.seed << ": R_T=" << regret
                  << " N_T=" << run.trace.total_queries() << "\n";
    }
}

int cmd_run(const std::string& path, int threads) {
    auto cfg = sparq::load_config(path);
    if (threads > 0) cfg.parallelism = threads;
    const auto report = sparq::run_experiment(cfg);
    print_run(report);
    return report.exit_code();
}

int cmd_sweep(const std::string& path, const std::vector<std::string>& specs, int threads) {
    const auto base = sparq::load_config(path);
    std::vector<sparq::SweepParam> params;
    for (const auto& s : specs) params.push_back(sparq::parse_sweep_param(s));
    if (params.empty()) throw sparq::ConfigError("sweep needs at least one --param");
    const auto combos = sparq::sweep_grid(params);

    // Parse every variant first so a bad value fails before any run starts.
    std::vector<sparq::ExperimentConfig> cfgs;
    for (std::size_t i = 0; i < combos.size(); ++i) {
        json doc = base.source;
        for (std::size_t k = 0; k < params.size(); ++k) sparq::set_dotted(doc, params[k].key, combos[i][k]);
        doc["output_dir"] = (fs::path(base.output_dir) / ("sweep_" + std::to_string(i))).string();
        doc["name"] = base.name + "_sweep_" + std::to_string(i);
        auto cfg = sparq::parse_config(doc, base.base_dir);
        if (threads > 0) cfg.parallelism = threads;
        cfgs.push_back(std::move(cfg));
    }

    const fs::path root = sparq::resolve_output_dir(base);
    fs::create_directories(root);
    std::ofstream index(root / "sweep_index.csv", std::ios::binary);
    index << "index,output_dir";
    for (const auto& p : params) index << ',' << p.key;
    index << ",failed_runs\n";
    std::size_t failed = 0;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        const auto report = sparq::run_experiment(cfgs[i]);
        failed += report.failed;
        index << i << ',' << report.output_dir.string();
        for (const auto& v : combos[i]) index << ',' << (v.is_string() ? v.get<std::string>() : v.dump());
        index << ',' << report.failed << '\n';
        std::cout << "sweep " << i << " -> " << report.output_dir.string() << " (" << report.failed << " failed)\n";
    }
    return failed == 0 ? kOk : kPartial;
}

int cmd_analyze(const std::string& dir, const sparq::AnalyzeOptions& opts) {
    const auto report = sparq::analyze_traces(dir, opts);
    std::cout << "traces: " << report.traces << ", skipped: " << report.skipped << "\n";
    for (const auto& name : report.policies) {
        const auto& r = report.regret.at(name);
        const auto& q = report.query_rate.at(name);
        std::cout << "  " << name << ": seeds=" << r.count << " T=" << r.mean.size()
                  << " mean R_T=" << r.mean.back() << " N_T/T=" << q.mean.back() << "\n";
    }
    return kOk;
}

struct AdversaryArgs {
    double gamma = 0.05;
    double B = 5.0;
    double lengthscale = 0.1;
    double lo = -1.0;
    double hi = 1.0;
    std::string out;
    double alpha = 2.0;
    long horizon = 0;
    long queries = 0;
    double sigma_sq = 0.1;
};

int cmd_adversary(const AdversaryArgs& a) {
    const auto fam = sparq::build_adversary(1, a.gamma, a.B, a.lengthscale, a.lo, a.hi);
    const auto check = sparq::check_adversary(fam);
    json j;
    j["gamma"] = fam.gamma;
    j["rkhs_bound"] = fam.rkhs_bound;
    j["lengthscale"] = fam.lengthscale;
    j["domain"] = {fam.lo, fam.hi};
    j["count"] = fam.count;
    j["h0"] = fam.h0;
    j["zeta"] = fam.zeta;
    j["log_term"] = fam.log_term;
    j["bump_width"] = fam.bump_width;
    j["cell_width"] = fam.cell_width;
    j["peaks"] = fam.peaks;
    j["rkhs_norm_estimate"] = fam.rkhs_norm;
    j["max_peak_rel_error"] = check.max_peak_rel_error;
    j["max_cross_cell"] = check.max_cross_cell;
    j["separated"] = check.separated;
    j["norm_within_bound"] = check.norm_within_bound;
    j["fano_error_bound_no_information"] = sparq::fano_error_bound(fam.count, 0.0);
    if (a.horizon > 0) {
        const auto nc = sparq::necessity_check(a.alpha, a.horizon, a.queries, a.sigma_sq);
        j["necessity"] = {{"alpha", a.alpha},
                          {"horizon", a.horizon},
                          {"queries", a.queries},
                          {"bandit_inv_var_sum", nc.bandit_inv_var_sum},
                          {"l_star", nc.l_star},
                          {"info_cap", nc.info_cap},
                          {"threshold", nc.threshold},
                          {"verdict", nc.verdict},
                          {"note", nc.note}};
        const double inv_var = nc.bandit_inv_var_sum + static_cast<double>(a.queries) / a.sigma_sq;
        const double kl = sparq::kl_sum_bound(a.gamma, fam.count, inv_var);
        j["kl_sum_bound"] = kl;
        j["fano_error_bound"] = sparq::fano_error_bound(fam.count, kl);
    }
    std::cout << j.dump(2) << "\n";
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::ofstream(fs::path(a.out) / "adversary.json", std::ios::binary) << j.dump(2) << "\n";
        std::ofstream members(fs::path(a.out) / "members.csv", std::ios::binary);
        members << "x";
        for (long m = 0; m < fam.count; ++m) members << ",f" << m + 1;
        members << "\n";
        constexpr int kSamples = 2001;
        for (int k = 0; k < kSamples; ++k) {
            const double x = fam.lo + (fam.hi - fam.lo) * k / (kSamples - 1);
            members << sparq::format_double(x);
            for (std::size_t m = 0; m < fam.peaks.size(); ++m) members << ',' << sparq::format_double(fam.member(m, x));
            members << "\n";
        }
    }
    return check.separated && check.norm_within_bound ? kOk : kPartial;
}

int cmd_validate(const std::string& path) {
    const auto cfg = sparq::load_config(path);
    auto env = sparq::make_environment(cfg, cfg.seed_base);
    std::cout << "config ok: " << cfg.name << "\n"
              << "  environment: " << cfg.environment.type << " (dim " << env->dim() << ")\n"
              << "  horizon: " << cfg.horizon << ", seeds: " << cfg.seeds << "\n"
              << "  candidates: " << sparq::candidate_grid(cfg, *env).rows() << "\n"
              << "  output: " << sparq::resolve_output_dir(cfg).string() << "\n";
    for (const auto& p : cfg.policies) std::cout << "  policy " << p.name << " (" << sparq::variant_name(p.config.variant) << ")\n";
    const auto diag = sparq::environment_diagnostics(cfg);
    if (diag.value("lambda_max_below_one", false))
        std::cout << "  note: lambda_max < 1, so the RKHS norm of f_t can exceed the configured bound\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-varying GP bandits with sparse expert re-queries"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 0;
    auto* run = app.add_subcommand("run", "Run every (policy, seed) pair of an experiment");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--threads", threads, "Worker threads (overrides parallelism)");

    std::vector<std::string> params;
    auto* sweep = app.add_subcommand("sweep", "Run an experiment over a grid of config overrides");
    sweep->add_option("config", config_path, "Experiment config (JSON)")->required();
    sweep->add_option("--param", params, "Dotted key and values, e.g. policy_defaults.budget_c=0.5,1,2")->required();
    sweep->add_option("--threads", threads, "Worker threads (overrides parallelism)");

    std::string dir;
    sparq::AnalyzeOptions analyze_opts;
    auto* analyze = app.add_subcommand("analyze", "Derive regret, query-rate and overlay tables from traces");
    analyze->add_option("dir", dir, "Experiment output directory or a directory of trace CSVs")->required();
    analyze->add_option("--alpha", analyze_opts.overlay.alpha, "Drift exponent for overlays");
    analyze->add_option("--alpha-tilde", analyze_opts.overlay.alpha_tilde, "Window exponent for overlays");
    analyze->add_option("--dim", analyze_opts.overlay.d, "Input dimension for overlays");
    analyze->add_option("--delta", analyze_opts.overlay.delta, "Confidence level for overlays");

    AdversaryArgs adv;
    auto* adversary = app.add_subcommand("adversary", "Build the bump adversary family and its diagnostics");
    adversary->add_option("--gamma", adv.gamma, "Bump half-height gamma");
    adversary->add_option("--rkhs-bound", adv.B, "RKHS norm bound B");
    adversary->add_option("--lengthscale", adv.lengthscale, "Kernel lengthscale l");
    adversary->add_option("--lo", adv.lo, "Domain lower end");
    adversary->add_option("--hi", adv.hi, "Domain upper end");
    adversary->add_option("--out", adv.out, "Directory for adversary.json and members.csv");
    adversary->add_option("--alpha", adv.alpha, "Drift exponent for the query-necessity report");
    adversary->add_option("--horizon", adv.horizon, "Horizon T for the query-necessity report (0 skips it)");
    adversary->add_option("--queries", adv.queries, "Total expert queries N_T");
    adversary->add_option("--sigma-sq", adv.sigma_sq, "Observation noise variance");

    auto* validate = app.add_subcommand("validate", "Check a config without running it");
    validate->add_option("config", config_path, "Experiment config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) return cmd_run(config_path, threads);
        if (*sweep) return cmd_sweep(config_path, params, threads);
        if (*analyze) return cmd_analyze(dir, analyze_opts);
        if (*adversary) return cmd_adversary(adv);
        if (*validate) return cmd_validate(config_path);
    } catch (const sparq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const sparq::InputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPartial;
    }
    return kOk;
}
