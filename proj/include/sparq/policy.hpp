#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sparq/dataset.hpp"
#include "sparq/dpp.hpp"
#include "sparq/kernel.hpp"
#include "sparq/posterior.hpp"
#include "sparq/windows.hpp"

namespace sparq {

enum class Variant { GpUcb, Sparq, WSparq, RGpUcb, SwGpUcb, TvGpUcb, WGpUcb };

/// Canonical upper-case name, e.g. "W_SPARQ".
std::string variant_name(Variant v);
/// Accepts canonical names case-insensitively, with '-' or '_' separators.
Variant parse_variant(const std::string& name);
std::vector<Variant> all_variants();

struct PolicyConfig {
    Variant variant = Variant::GpUcb;
    double delta = 0.1;
    double rkhs_bound = 5.0;
    double sigma_sq = 0.1;
    /// Drift exponent of the uncertainty-injection noise model.
    double alpha = 1.0;
    /// Window exponent; W_SPARQ only.
    double alpha_tilde = 0.25;
    double budget_c = 1.0;
    /// Reset period (R_GP_UCB) or window size (SW_GP_UCB).
    long window = 50;
    /// Forgetting rate epsilon of TV_GP_UCB.
    double forgetting = 0.03;
    /// Per-step weight decay w of W_GP_UCB.
    double weight_decay = 0.97;
    /// Swap-chain length; default_mcmc_steps(n) when unset.
    std::optional<std::size_t> mcmc_steps;

    /// Throws ConfigError on out-of-range values for this variant.
    void validate() const;
};

/// Per-run bookkeeping. Dataset timestamps in regression_data are the time
/// of each observation's last refresh, not its original acquisition.
struct PolicyState {
    long t = 0;
    Dataset history;
    Dataset regression_data;
    Dataset sparse_data;
    Points distinct_inputs;
    long window_start = 0;
    long window_end = 0;
    std::vector<double> beta_history;
    std::size_t queries_spent = 0;
};

/// Source of fresh noisy evaluations of the current objective.
class Expert {
public:
    virtual ~Expert() = default;
    virtual Vector query(const Points& X, long t) = 0;
};

struct Decision {
    std::size_t index = 0;
    double beta = 0.0;
    /// Expert queries issued while producing this decision.
    std::size_t queries = 0;
    double max_clip = 0.0;
    std::size_t reported_clips = 0;
    /// Posterior mean on the candidate grid behind this decision.
    Vector grid_mean;
};

struct UcbChoice {
    std::size_t index = 0;
    double score = 0.0;
    BatchMoments moments;
};

/// sqrt(2 (log(2/delta) + logdet_ratio/2)) + B.
double beta_schedule(const Posterior& post, double delta, double rkhs_bound);

/// argmax of mean + beta * sd over the candidate rows; lowest index on ties.
UcbChoice ucb_select(const Posterior& post, double beta, const Points& candidates);

/// sigma_sq * (1 + (now - ts)^alpha), exactly sigma_sq when ts == now.
Vector assign_noise_vars(const std::vector<long>& timestamps, long now, double alpha, double sigma_sq);

/// Fixed inputs shared by every step of one run.
struct PolicyContext {
    PolicyConfig config;
    KernelSpec kernel;
    Points candidates;
    WindowPlan plan;  ///< W_SPARQ only
};

struct Observation {
    Vector x;
    double y = 0.0;
    long t = 0;
};

/// Each step consumes the observation made at step obs.t, issues any expert
/// queries at that time, refits, and chooses the input for step obs.t + 1.
Decision step_gp_ucb(PolicyState& state, const PolicyContext& ctx, const Observation& obs);
Decision step_sparq(PolicyState& state, const PolicyContext& ctx, const Observation& obs, Expert& expert, Rng& rng);
Decision step_w_sparq(PolicyState& state, const PolicyContext& ctx, const Observation& obs, Expert& expert, Rng& rng);
Decision step_baseline(PolicyState& state, const PolicyContext& ctx, const Observation& obs);

/// Owns state and context for one run and dispatches on the variant.
class Policy {
public:
    Policy(PolicyConfig config, KernelSpec kernel, Points candidates, long horizon);

    /// Decision for step 1, made on the prior.
    Decision first();
    /// Feeds the observation of step state().t + 1 and returns the next decision.
    Decision step(const Vector& x, double y, Expert& expert, Rng& rng);

    const PolicyState& state() const { return state_; }
    const PolicyContext& context() const { return ctx_; }

private:
    PolicyContext ctx_;
    PolicyState state_;
};

}  // namespace sparq
