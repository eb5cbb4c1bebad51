#pragma once

#include <cstddef>
#include <vector>

#include "sparq/dataset.hpp"
#include "sparq/kernel.hpp"

namespace sparq {

/// Optional temporal modulation of the SE kernel, used by the forgetting
/// and weighted baselines. Queries are always made at time `now`.
///   Forgetting: k((x,t),(x',t')) = k(x,x') (1-rate)^{|t-t'|/2}
///   Weighted:   observation i is scaled by rate^{(now-t_i)/2}
struct TemporalCoupling {
    enum class Kind { None, Forgetting, Weighted };
    Kind kind = Kind::None;
    double rate = 0.0;
    long now = 0;

    double pair_factor(long ti, long tj) const;
    double query_factor(long ti) const;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    /// Magnitude of a negative roundoff variance that was clipped to zero.
    double clipped = 0.0;
};

struct BatchMoments {
    Vector mean;
    Vector variance;
    /// Largest clip applied, and how many clips exceeded kClipReportLevel.
    double max_clip = 0.0;
    std::size_t reported_clips = 0;
};

/// Clips larger than this are surfaced in diagnostics.
inline constexpr double kClipReportLevel = 1e-8;

/// Fitted GP state. Immutable after fit(); safe to share read-only.
class Posterior {
public:
    static Posterior fit(const Dataset& data, const KernelSpec& spec, const TemporalCoupling& coupling = {});

    Moments evaluate(const Vector& x) const;

    /// Moments at every row of X. Columns are processed in fixed-size blocks
    /// spread over OpenMP threads, so results do not depend on thread count.
    BatchMoments evaluate(const Points& X) const;

    /// Joint posterior covariance over the rows of X.
    Matrix covariance(const Points& X) const;

    /// Prior-scaled cross covariance between basis and the rows of X.
    Matrix cross_covariance(const Points& X) const;

    const KernelSpec& kernel() const { return kernel_; }
    const Points& basis() const { return basis_; }
    const Matrix& chol() const { return chol_; }
    const Vector& dual_weights() const { return dual_weights_; }
    double logdet_k_plus_sigma() const { return logdet_k_plus_sigma_; }
    double logdet_sigma() const { return logdet_sigma_; }
    double jitter() const { return jitter_; }
    std::size_t size() const { return static_cast<std::size_t>(basis_.rows()); }

private:
    KernelSpec kernel_;
    Points basis_;
    Vector query_scale_;
    Matrix chol_;
    Vector dual_weights_;
    double logdet_k_plus_sigma_ = 0.0;
    double logdet_sigma_ = 0.0;
    double jitter_ = 0.0;
};

inline Posterior fit_posterior(const Dataset& data, const KernelSpec& spec, const TemporalCoupling& coupling = {}) {
    return Posterior::fit(data, spec, coupling);
}

inline Moments posterior_eval(const Posterior& post, const Vector& x) { return post.evaluate(x); }

/// log(|K + Sigma| / |Sigma|); zero for an empty posterior.
double logdet_ratio(const Posterior& post);

namespace serial {

/// One point at a time, one triangular solve per point.
BatchMoments evaluate(const Posterior& post, const Points& X);

}  // namespace serial
}  // namespace sparq
