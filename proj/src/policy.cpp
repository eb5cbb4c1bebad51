#include "sparq/policy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "sparq/budget.hpp"

namespace sparq {

namespace {

struct VariantName {
    Variant variant;
    const char* name;
};

constexpr VariantName kVariantNames[] = {
    {Variant::GpUcb, "GP_UCB"},     {Variant::Sparq, "SPARQ"},         {Variant::WSparq, "W_SPARQ"},
    {Variant::RGpUcb, "R_GP_UCB"},  {Variant::SwGpUcb, "SW_GP_UCB"},   {Variant::TvGpUcb, "TV_GP_UCB"},
    {Variant::WGpUcb, "W_GP_UCB"},
};

Decision decide(PolicyState& state, const PolicyContext& ctx, const Posterior& post) {
    Decision d;
    d.beta = beta_schedule(post, ctx.config.delta, ctx.config.rkhs_bound);
    UcbChoice choice = ucb_select(post, d.beta, ctx.candidates);
    d.index = choice.index;
    d.max_clip = choice.moments.max_clip;
    d.reported_clips = choice.moments.reported_clips;
    d.grid_mean = std::move(choice.moments.mean);
    state.beta_history.push_back(d.beta);
    return d;
}

void record(PolicyState& state, const PolicyContext& ctx, const Observation& obs) {
    if (obs.t != state.t + 1)
        throw InputError("policy step: expected observation for step " + std::to_string(state.t + 1) + ", got " +
                         std::to_string(obs.t));
    if (obs.x.size() != ctx.kernel.dim) throw InputError("policy step: observation has the wrong dimension");
    state.t = obs.t;
    state.history.append(obs.x, obs.y, ctx.config.sigma_sq, obs.t);

    auto& X = state.distinct_inputs;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        if (X.row(i) == obs.x.transpose()) return;
    X.conservativeResize(X.rows() + 1, ctx.kernel.dim);
    X.row(X.rows() - 1) = obs.x.transpose();
}

// Chooses a diverse subset of the distinct past inputs and re-queries the
// expert there; the answers carry base noise and the current timestamp.
Dataset requery(PolicyState& state, const PolicyContext& ctx, long t, Expert& expert, Rng& rng) {
    const Points& X = state.distinct_inputs;
    const std::size_t budget =
        query_budget(t, ctx.kernel.dim, ctx.config.budget_c, static_cast<std::size_t>(X.rows()));
    const Matrix K = kernel_matrix(X, ctx.kernel);
    SelectOptions opts;
    opts.mcmc_steps = ctx.config.mcmc_steps;
    const SparseSelection sel = select_subset(K, budget, rng, opts);

    Dataset sparse(ctx.kernel.dim);
    Points Xs(static_cast<Eigen::Index>(sel.sample.indices.size()), ctx.kernel.dim);
    for (std::size_t i = 0; i < sel.sample.indices.size(); ++i)
        Xs.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(sel.sample.indices[i]));
    const Vector ys = expert.query(Xs, t);
    if (ys.size() != Xs.rows()) throw NumericalError("expert returned the wrong number of answers");
    for (Eigen::Index i = 0; i < Xs.rows(); ++i)
        sparse.append(Xs.row(i).transpose(), ys(i), ctx.config.sigma_sq, t);
    state.queries_spent += static_cast<std::size_t>(Xs.rows());
    return sparse;
}

Dataset with_drift_noise(const Dataset& data, long now, const PolicyConfig& cfg) {
    Dataset out = data;
    out.noise_vars = assign_noise_vars(data.timestamps, now, cfg.alpha, cfg.sigma_sq);
    return out;
}

}  // namespace

std::string variant_name(Variant v) {
    for (const auto& e : kVariantNames)
        if (e.variant == v) return e.name;
    return "UNKNOWN";
}

Variant parse_variant(const std::string& name) {
    std::string key;
    for (const char c : name) key += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (const auto& e : kVariantNames)
        if (key == e.name) return e.variant;
    throw ConfigError("unknown policy variant '" + name + "'");
}

std::vector<Variant> all_variants() {
    std::vector<Variant> out;
    for (const auto& e : kVariantNames) out.push_back(e.variant);
    return out;
}

void PolicyConfig::validate() const {
    const std::string who = variant_name(variant) + ": ";
    if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError(who + "delta must lie in (0, 1]");
    if (!(rkhs_bound >= 0.0) || !std::isfinite(rkhs_bound)) throw ConfigError(who + "rkhs_bound must be >= 0");
    if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) throw ConfigError(who + "sigma_sq must be > 0");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError(who + "alpha must be >= 0");
    if (!(budget_c > 0.0) || !std::isfinite(budget_c)) throw ConfigError(who + "budget_c must be > 0");
    if (mcmc_steps && *mcmc_steps == 0) throw ConfigError(who + "mcmc_steps must be >= 1");
    switch (variant) {
        case Variant::WSparq:
            if (!(alpha > 0.0)) throw ConfigError(who + "alpha must be > 0 for the window rule");
            if (!(alpha_tilde >= 0.0 && alpha_tilde < 1.0 / 3.0))
                throw ConfigError(who + "alpha_tilde must lie in [0, 1/3)");
            if (alpha_tilde > alpha) throw ConfigError(who + "alpha_tilde must not exceed alpha");
            break;
        case Variant::RGpUcb:
        case Variant::SwGpUcb:
            if (window < 1) throw ConfigError(who + "window must be >= 1");
            break;
        case Variant::TvGpUcb:
            if (!(forgetting >= 0.0 && forgetting <= 1.0)) throw ConfigError(who + "forgetting must lie in [0, 1]");
            break;
        case Variant::WGpUcb:
            if (!(weight_decay > 0.0 && weight_decay <= 1.0))
                throw ConfigError(who + "weight_decay must lie in (0, 1]");
            break;
        default:
            break;
    }
}

double beta_schedule(const Posterior& post, double delta, double rkhs_bound) {
    if (!(delta > 0.0 && delta <= 1.0)) throw InputError("beta_schedule: delta must lie in (0, 1]");
    return std::sqrt(2.0 * (std::log(2.0 / delta) + 0.5 * logdet_ratio(post))) + rkhs_bound;
}

UcbChoice ucb_select(const Posterior& post, double beta, const Points& candidates) {
    if (candidates.rows() == 0) throw InputError("ucb_select: empty candidate set");
    UcbChoice out;
    out.moments = post.evaluate(candidates);
    // Serial reduction: strict comparison keeps the lowest index on ties.
    for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
        const double score = out.moments.mean(i) + beta * std::sqrt(out.moments.variance(i));
        if (i == 0 || score > out.score) {
            out.score = score;
            out.index = static_cast<std::size_t>(i);
        }
    }
    return out;
}

Vector assign_noise_vars(const std::vector<long>& timestamps, long now, double alpha, double sigma_sq) {
    Vector out(static_cast<Eigen::Index>(timestamps.size()));
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        const long gap = now - timestamps[i];
        if (gap < 0) throw InputError("assign_noise_vars: timestamp after the current step");
        // pow(0, 0) is 1, so the zero gap is handled explicitly.
        out(static_cast<Eigen::Index>(i)) =
            gap == 0 ? sigma_sq : sigma_sq * (1.0 + std::pow(static_cast<double>(gap), alpha));
    }
    return out;
}

Decision step_gp_ucb(PolicyState& state, const PolicyContext& ctx, const Observation& obs) {
    record(state, ctx, obs);
    state.regression_data = with_drift_noise(state.history, state.t, ctx.config);
    return decide(state, ctx, Posterior::fit(state.regression_data, ctx.kernel));
}

Decision step_sparq(PolicyState& state, const PolicyContext& ctx, const Observation& obs, Expert& expert, Rng& rng) {
    record(state, ctx, obs);
    const std::size_t before = state.queries_spent;
    state.sparse_data = requery(state, ctx, state.t, expert, rng);
    state.regression_data = state.sparse_data;
    Decision d = decide(state, ctx, Posterior::fit(state.regression_data, ctx.kernel));
    d.queries = state.queries_spent - before;
    return d;
}

Decision step_w_sparq(PolicyState& state, const PolicyContext& ctx, const Observation& obs, Expert& expert,
                      Rng& rng) {
    record(state, ctx, obs);
    const long t = state.t;
    const std::size_t before = state.queries_spent;
    state.window_start = ctx.plan.window_start(t);
    state.window_end = ctx.plan.window_end(t);
    if (t == state.window_start) {
        state.sparse_data = requery(state, ctx, t, expert, rng);
        state.regression_data = state.sparse_data;
    } else {
        state.regression_data.append(obs.x, obs.y, ctx.config.sigma_sq, t);
    }
    const Dataset fit_data = with_drift_noise(state.regression_data, t, ctx.config);
    Decision d = decide(state, ctx, Posterior::fit(fit_data, ctx.kernel));
    d.queries = state.queries_spent - before;
    return d;
}

Decision step_baseline(PolicyState& state, const PolicyContext& ctx, const Observation& obs) {
    record(state, ctx, obs);
    const long t = state.t;
    const auto& cfg = ctx.config;
    TemporalCoupling coupling;
    coupling.now = t;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < state.history.size(); ++i) {
        const long ts = state.history.timestamps[i];
        switch (cfg.variant) {
            case Variant::RGpUcb:
                if ((ts - 1) / cfg.window == (t - 1) / cfg.window) rows.push_back(i);
                break;
            case Variant::SwGpUcb:
                if (ts > t - cfg.window) rows.push_back(i);
                break;
            case Variant::TvGpUcb:
            case Variant::WGpUcb:
                rows.push_back(i);
                break;
            default:
                throw InputError("step_baseline: " + variant_name(cfg.variant) + " is not a baseline");
        }
    }
    if (cfg.variant == Variant::TvGpUcb) {
        coupling.kind = TemporalCoupling::Kind::Forgetting;
        coupling.rate = cfg.forgetting;
    } else if (cfg.variant == Variant::WGpUcb) {
        coupling.kind = TemporalCoupling::Kind::Weighted;
        coupling.rate = cfg.weight_decay;
    }
    state.regression_data = state.history.subset(rows);
    return decide(state, ctx, Posterior::fit(state.regression_data, ctx.kernel, coupling));
}

Policy::Policy(PolicyConfig config, KernelSpec kernel, Points candidates, long horizon) {
    config.validate();
    kernel.validate();
    detail::check_points(candidates, kernel, "Policy");
    if (candidates.rows() == 0) throw InputError("Policy: empty candidate set");
    if (horizon < 1) throw InputError("Policy: horizon must be >= 1");
    ctx_.config = config;
    ctx_.kernel = kernel;
    ctx_.candidates = std::move(candidates);
    if (config.variant == Variant::WSparq) ctx_.plan = plan_windows(config.alpha, config.alpha_tilde, 1, horizon);
    ctx_.plan.horizon = horizon;
    state_.history = Dataset(kernel.dim);
    state_.regression_data = Dataset(kernel.dim);
    state_.sparse_data = Dataset(kernel.dim);
    state_.distinct_inputs = Points(0, kernel.dim);
}

Decision Policy::first() {
    if (state_.t != 0) throw InputError("Policy::first called after the run started");
    return decide(state_, ctx_, Posterior::fit(Dataset(ctx_.kernel.dim), ctx_.kernel));
}

Decision Policy::step(const Vector& x, double y, Expert& expert, Rng& rng) {
    const Observation obs{x, y, state_.t + 1};
    if (obs.t > ctx_.plan.horizon) throw InputError("Policy::step: past the horizon");
    switch (ctx_.config.variant) {
        case Variant::GpUcb:
            return step_gp_ucb(state_, ctx_, obs);
        case Variant::Sparq:
            return step_sparq(state_, ctx_, obs, expert, rng);
        case Variant::WSparq:
            return step_w_sparq(state_, ctx_, obs, expert, rng);
        default:
            return step_baseline(state_, ctx_, obs);
    }
}

}  // namespace sparq
