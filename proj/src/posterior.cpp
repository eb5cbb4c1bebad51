#include "sparq/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace sparq {

double TemporalCoupling::pair_factor(long ti, long tj) const {
    switch (kind) {
        case Kind::None:
            return 1.0;
        case Kind::Forgetting:
            return std::pow(1.0 - rate, std::abs(ti - tj) / 2.0);
        case Kind::Weighted:
            return query_factor(ti) * query_factor(tj);
    }
    return 1.0;
}

double TemporalCoupling::query_factor(long ti) const {
    switch (kind) {
        case Kind::None:
            return 1.0;
        case Kind::Forgetting:
            return std::pow(1.0 - rate, std::abs(now - ti) / 2.0);
        case Kind::Weighted:
            return std::pow(rate, static_cast<double>(now - ti) / 2.0);
    }
    return 1.0;
}

namespace {

constexpr Eigen::Index kEvalBlock = 64;

// Jitter levels relative to the kernel amplitude, tried in order.
constexpr double kJitterLevels[] = {0.0, 1e-9, 1e-6};

double clip_variance(double& v) {
    if (v >= 0.0) return 0.0;
    const double c = -v;
    v = 0.0;
    return c;
}

}  // namespace

Posterior Posterior::fit(const Dataset& data, const KernelSpec& spec, const TemporalCoupling& coupling) {
    spec.validate();
    data.validate();
    if (!data.empty() && data.dim() != spec.dim)
        throw InputError("fit_posterior: dataset dimension " + std::to_string(data.dim()) +
                         " does not match kernel dimension " + std::to_string(spec.dim));

    Posterior post;
    post.kernel_ = spec;
    post.basis_ = data.empty() ? Points(0, spec.dim) : data.inputs;
    const auto n = static_cast<Eigen::Index>(data.size());
    post.query_scale_ = Vector::Ones(n);
    if (n == 0) {
        post.chol_.resize(0, 0);
        post.dual_weights_.resize(0);
        return post;
    }

    Matrix gram = kernel_matrix(data.inputs, spec);
    if (coupling.kind != TemporalCoupling::Kind::None) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const long ti = data.timestamps[static_cast<std::size_t>(i)];
            post.query_scale_(i) = coupling.query_factor(ti);
            for (Eigen::Index j = 0; j < n; ++j)
                gram(i, j) *= coupling.pair_factor(ti, data.timestamps[static_cast<std::size_t>(j)]);
        }
    }
    gram.diagonal() += data.noise_vars;

    for (const double level : kJitterLevels) {
        const double jitter = level * spec.amplitude_sq;
        Matrix A = gram;
        A.diagonal().array() += jitter;
        Eigen::LLT<Matrix> llt(A);
        if (llt.info() != Eigen::Success) continue;
        post.chol_ = llt.matrixL();
        post.dual_weights_ = llt.solve(data.outputs);
        post.jitter_ = jitter;
        post.logdet_k_plus_sigma_ = 2.0 * post.chol_.diagonal().array().log().sum();
        post.logdet_sigma_ = data.noise_vars.array().log().sum();
        return post;
    }

    Matrix A = gram;
    A.diagonal().array() += kJitterLevels[2] * spec.amplitude_sq;
    const double min_pivot = Eigen::LDLT<Matrix>(A).vectorD().minCoeff();
    std::ostringstream msg;
    msg << "fit_posterior: K + Sigma is not positive definite after jitter; smallest pivot " << min_pivot;
    throw NumericalError(msg.str());
}

Matrix Posterior::cross_covariance(const Points& X) const {
    Matrix k = cross_kernel(basis_, X, kernel_);
    k.array().colwise() *= query_scale_.array();
    return k;
}

Moments Posterior::evaluate(const Vector& x) const {
    if (x.size() != kernel_.dim) throw InputError("posterior_eval: point dimension mismatch");
    Moments m;
    m.variance = kernel_.amplitude_sq;
    if (basis_.rows() == 0) return m;
    const Vector k = cross_covariance(x.transpose());
    m.mean = k.dot(dual_weights_);
    const Vector v = chol_.triangularView<Eigen::Lower>().solve(k);
    m.variance = kernel_.amplitude_sq - v.squaredNorm();
    m.clipped = clip_variance(m.variance);
    return m;
}

BatchMoments Posterior::evaluate(const Points& X) const {
    detail::check_points(X, kernel_, "posterior_eval");
    const Eigen::Index m = X.rows();
    BatchMoments out;
    out.mean = Vector::Zero(m);
    out.variance = Vector::Constant(m, kernel_.amplitude_sq);
    if (basis_.rows() == 0 || m == 0) return out;

    Vector clips = Vector::Zero(m);
    const Eigen::Index blocks = (m + kEvalBlock - 1) / kEvalBlock;
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < blocks; ++b) {
        const Eigen::Index start = b * kEvalBlock;
        const Eigen::Index len = std::min(kEvalBlock, m - start);
        const Matrix k = cross_covariance(X.middleRows(start, len));
        out.mean.segment(start, len) = k.transpose() * dual_weights_;
        const Matrix v = chol_.triangularView<Eigen::Lower>().solve(k);
        for (Eigen::Index j = 0; j < len; ++j) {
            double var = kernel_.amplitude_sq - v.col(j).squaredNorm();
            clips(start + j) = clip_variance(var);
            out.variance(start + j) = var;
        }
    }
    out.max_clip = clips.maxCoeff();
    out.reported_clips = static_cast<std::size_t>((clips.array() > kClipReportLevel).count());
    return out;
}

Matrix Posterior::covariance(const Points& X) const {
    Matrix cov = kernel_matrix(X, kernel_);
    if (basis_.rows() == 0) return cov;
    const Matrix v = chol_.triangularView<Eigen::Lower>().solve(cross_covariance(X));
    cov.noalias() -= v.transpose() * v;
    return 0.5 * (cov + cov.transpose());
}

double logdet_ratio(const Posterior& post) {
    if (post.size() == 0) return 0.0;
    return std::max(0.0, post.logdet_k_plus_sigma() - post.logdet_sigma());
}

namespace serial {

BatchMoments evaluate(const Posterior& post, const Points& X) {
    BatchMoments out;
    out.mean.resize(X.rows());
    out.variance.resize(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Moments m = post.evaluate(Vector(X.row(i).transpose()));
        out.mean(i) = m.mean;
        out.variance(i) = m.variance;
        out.max_clip = std::max(out.max_clip, m.clipped);
        if (m.clipped > kClipReportLevel) ++out.reported_clips;
    }
    return out;
}

}  // namespace serial
}  // namespace sparq
