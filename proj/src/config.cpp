#include "sparq/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace sparq {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

void read_number(const json& obj, const char* key, double& out, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number()) throw ConfigError(where + "." + key + " must be a number");
    out = it->get<double>();
}

template <class I>
void read_integer(const json& obj, const char* key, I& out, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_integer() && !it->is_number_unsigned())
        throw ConfigError(where + "." + key + " must be an integer");
    out = it->get<I>();
}

const std::set<std::string> kPolicyKeys = {"variant",      "name",       "delta",  "rkhs_bound",
                                           "sigma_sq",     "alpha",      "alpha_tilde", "budget_c",
                                           "window",       "forgetting", "weight_decay", "mcmc_steps"};

void apply_policy_fields(const json& obj, PolicyConfig& pc, const std::string& where) {
    if (obj.contains("variant")) {
        if (!obj["variant"].is_string()) throw ConfigError(where + ".variant must be a string");
        pc.variant = parse_variant(obj["variant"].get<std::string>());
    }
    read_number(obj, "delta", pc.delta, where);
    read_number(obj, "rkhs_bound", pc.rkhs_bound, where);
    read_number(obj, "sigma_sq", pc.sigma_sq, where);
    read_number(obj, "alpha", pc.alpha, where);
    read_number(obj, "alpha_tilde", pc.alpha_tilde, where);
    read_number(obj, "budget_c", pc.budget_c, where);
    read_integer(obj, "window", pc.window, where);
    read_number(obj, "forgetting", pc.forgetting, where);
    read_number(obj, "weight_decay", pc.weight_decay, where);
    if (obj.contains("mcmc_steps")) {
        long steps = 0;
        read_integer(obj, "mcmc_steps", steps, where);
        if (steps < 1) throw ConfigError(where + ".mcmc_steps must be >= 1");
        pc.mcmc_steps = static_cast<std::size_t>(steps);
    }
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (name.empty()) throw ConfigError("name must not be empty");
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (seeds < 1) throw ConfigError("seeds must be >= 1");
    if (parallelism < 0) throw ConfigError("parallelism must be >= 0");
    if (grid_size < 1) throw ConfigError("grid_size must be >= 1");
    try {
        kernel.validate();
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    const auto& env = environment;
    if (env.type != "synthetic" && env.type != "brownian" && env.type != "grid_series")
        throw ConfigError("environment.type must be synthetic, brownian or grid_series");
    if (!(env.sigma_sq > 0.0)) throw ConfigError("environment.sigma_sq must be > 0");
    if (env.type != "grid_series") {
        if (!(env.hi > env.lo)) throw ConfigError("environment.domain must satisfy lo < hi");
        if (kernel.dim != 1) throw ConfigError("synthetic and brownian environments are one-dimensional");
    }
    if (env.type == "synthetic" && env.n_centers < 1) throw ConfigError("environment.n_centers must be >= 1");
    if (env.type == "brownian" && env.initial != "rkhs" && env.initial != "zero")
        throw ConfigError("environment.initial must be rkhs or zero");
    if (env.type == "grid_series" && env.path.empty()) throw ConfigError("environment.path is required for grid_series");
    if (policies.empty()) throw ConfigError("at least one policy is required");
    std::set<std::string> names;
    for (const auto& p : policies) {
        if (p.name.empty()) throw ConfigError("policy names must not be empty");
        if (p.name.find_first_of("/\\ ,") != std::string::npos)
            throw ConfigError("policy name '" + p.name + "' contains a path separator, space or comma");
        if (!names.insert(p.name).second) throw ConfigError("duplicate policy name '" + p.name + "'");
        p.config.validate();
    }
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    reject_unknown(doc,
                   {"name", "horizon", "seeds", "seed_base", "output_dir", "parallelism", "grid_size",
                    "record_prediction_error", "plot", "kernel", "environment", "policy_defaults", "policies"},
                   "config");
    ExperimentConfig cfg;
    cfg.source = doc;
    cfg.base_dir = base_dir;
    read(doc, "name", cfg.name, "config");
    read_integer(doc, "horizon", cfg.horizon, "config");
    read_integer(doc, "seeds", cfg.seeds, "config");
    read_integer(doc, "seed_base", cfg.seed_base, "config");
    read(doc, "output_dir", cfg.output_dir, "config");
    read_integer(doc, "parallelism", cfg.parallelism, "config");
    read_integer(doc, "grid_size", cfg.grid_size, "config");
    read(doc, "record_prediction_error", cfg.record_prediction_error, "config");
    read(doc, "plot", cfg.plot, "config");

    if (doc.contains("kernel")) {
        const auto& k = doc["kernel"];
        reject_unknown(k, {"amplitude_sq", "lengthscale", "dim"}, "kernel");
        read_number(k, "amplitude_sq", cfg.kernel.amplitude_sq, "kernel");
        read_number(k, "lengthscale", cfg.kernel.lengthscale, "kernel");
        read_integer(k, "dim", cfg.kernel.dim, "kernel");
    }

    if (doc.contains("environment")) {
        const auto& e = doc["environment"];
        reject_unknown(e, {"type", "domain", "n_centers", "rkhs_bound", "time_freq", "sigma_sq", "initial", "path"},
                       "environment");
        auto& env = cfg.environment;
        read(e, "type", env.type, "environment");
        env.type = lower(env.type);
        if (e.contains("domain")) {
            const auto& d = e["domain"];
            if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
                throw ConfigError("environment.domain must be [lo, hi]");
            env.lo = d[0].get<double>();
            env.hi = d[1].get<double>();
        }
        read_integer(e, "n_centers", env.n_centers, "environment");
        read_number(e, "rkhs_bound", env.rkhs_bound, "environment");
        read_number(e, "time_freq", env.time_freq, "environment");
        read_number(e, "sigma_sq", env.sigma_sq, "environment");
        read(e, "initial", env.initial, "environment");
        read(e, "path", env.path, "environment");
        if (!env.path.empty() && std::filesystem::path(env.path).is_relative() && !base_dir.empty())
            env.path = (base_dir / env.path).lexically_normal().string();
    }

    PolicyConfig defaults;
    defaults.sigma_sq = cfg.environment.sigma_sq;
    defaults.rkhs_bound = cfg.environment.rkhs_bound;
    if (doc.contains("policy_defaults")) {
        const auto& pd = doc["policy_defaults"];
        reject_unknown(pd, kPolicyKeys, "policy_defaults");
        if (pd.contains("name")) throw ConfigError("policy_defaults must not set a name");
        apply_policy_fields(pd, defaults, "policy_defaults");
    }

    if (doc.contains("policies")) {
        const auto& ps = doc["policies"];
        if (!ps.is_array()) throw ConfigError("policies must be an array");
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const std::string where = "policies[" + std::to_string(i) + "]";
            PolicySpec spec;
            spec.config = defaults;
            if (ps[i].is_string()) {
                spec.config.variant = parse_variant(ps[i].get<std::string>());
            } else {
                reject_unknown(ps[i], kPolicyKeys, where);
                if (!ps[i].contains("variant")) throw ConfigError(where + ".variant is required");
                apply_policy_fields(ps[i], spec.config, where);
                read(ps[i], "name", spec.name, where);
            }
            if (spec.name.empty()) spec.name = lower(variant_name(spec.config.variant));
            cfg.policies.push_back(std::move(spec));
        }
    }

    if (cfg.environment.type != "grid_series") cfg.kernel.dim = 1;
    cfg.validate();
    return cfg;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_json_file(path), path.parent_path());
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
    std::filesystem::path out(cfg.output_dir);
    if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0')
        return std::filesystem::path(root) / (out.is_absolute() ? out.relative_path() : out);
    return out;
}

void set_dotted(json& doc, const std::string& dotted, const json& value) {
    if (dotted.empty()) throw ConfigError("empty sweep key");
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        const std::string seg = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (seg.empty()) throw ConfigError("malformed sweep key '" + dotted + "'");
        const bool last = dot == std::string::npos;
        if (node->is_array()) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(seg);
            } catch (const std::exception&) {
                throw ConfigError("sweep key '" + dotted + "': '" + seg + "' is not an array index");
            }
            if (idx >= node->size()) throw ConfigError("sweep key '" + dotted + "': index out of range");
            node = &(*node)[idx];
        } else if (node->is_object() || node->is_null()) {
            if (!last && !node->contains(seg)) (*node)[seg] = json::object();
            node = &(*node)[seg];
        } else {
            throw ConfigError("sweep key '" + dotted + "' descends into a scalar");
        }
        if (last) break;
        start = dot + 1;
    }
    *node = value;
}

SweepParam parse_sweep_param(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
        throw ConfigError("sweep parameter must look like key=v1,v2,...: '" + spec + "'");
    SweepParam p;
    p.key = spec.substr(0, eq);
    std::size_t start = eq + 1;
    while (true) {
        const auto comma = spec.find(',', start);
        const std::string raw = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (raw.empty()) throw ConfigError("empty value in sweep parameter '" + spec + "'");
        json v = json::parse(raw, nullptr, false);
        p.values.push_back(v.is_discarded() ? json(raw) : v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return p;
}

std::vector<std::vector<json>> sweep_grid(const std::vector<SweepParam>& params) {
    std::vector<std::vector<json>> out{{}};
    for (const auto& p : params) {
        std::vector<std::vector<json>> next;
        for (const auto& prefix : out)
            for (const auto& v : p.values) {
                auto row = prefix;
                row.push_back(v);
                next.push_back(std::move(row));
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace sparq
