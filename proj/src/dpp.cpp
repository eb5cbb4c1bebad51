#include "sparq/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sparq {

namespace {

// A principal minor below this fraction of (max diagonal)^M counts as zero.
constexpr double kMinorTolerance = 1e-12;
// Pivots more negative than this fraction of the scale mean K is not PSD.
constexpr double kNegativePivot = 1e-9;
constexpr std::size_t kRefactorEvery = 32;

void check_square(const Matrix& K, const char* what) {
    if (K.rows() != K.cols()) throw InputError(std::string(what) + ": kernel matrix must be square");
    if (!K.allFinite()) throw InputError(std::string(what) + ": kernel matrix has non-finite entries");
}

double diag_scale(const Matrix& K) {
    return K.rows() == 0 ? 1.0 : std::max(K.diagonal().maxCoeff(), std::numeric_limits<double>::min());
}

Matrix principal(const Matrix& K, const std::vector<std::size_t>& subset) {
    const auto m = static_cast<Eigen::Index>(subset.size());
    Matrix S(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            S(a, b) = K(static_cast<Eigen::Index>(subset[static_cast<std::size_t>(a)]),
                        static_cast<Eigen::Index>(subset[static_cast<std::size_t>(b)]));
    return S;
}

// log det of a PSD matrix by fully pivoted Cholesky; -inf once the largest
// remaining pivot is negligible. Unlike LDLT it never divides by the
// roundoff left over after the numerical rank is exhausted.
double pivoted_log_det(Matrix S, double scale) {
    const Eigen::Index m = S.rows();
    double log_det = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        Eigen::Index piv = k;
        for (Eigen::Index i = k + 1; i < m; ++i)
            if (S(i, i) > S(piv, piv)) piv = i;
        const double lowest = S.diagonal().tail(m - k).minCoeff();
        if (lowest < -kNegativePivot * scale)
            throw NumericalError("dpp_mcmc_sample: kernel matrix is not PSD (pivot " + std::to_string(lowest) + ")");
        if (S(piv, piv) <= kMinorTolerance * scale) return -std::numeric_limits<double>::infinity();
        if (piv != k) {
            S.row(k).swap(S.row(piv));
            S.col(k).swap(S.col(piv));
        }
        const double d = S(k, k);
        log_det += std::log(d);
        const Eigen::Index rest = m - k - 1;
        if (rest > 0)
            S.bottomRightCorner(rest, rest).noalias() -= S.col(k).tail(rest) * S.row(k).tail(rest) / d;
    }
    return log_det;
}

double minor_with_scale(const Matrix& K, const std::vector<std::size_t>& subset, double scale) {
    const double det = principal(K, subset).determinant();
    const double floor = kMinorTolerance * std::pow(scale, static_cast<double>(subset.size()));
    return det > floor ? det : 0.0;
}

// Advances `c` to the next M-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t m = c.size();
    std::size_t i = m;
    while (i > 0) {
        --i;
        if (c[i] < n - m + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::size_t uniform_index(std::size_t n, Rng& rng) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(rng);
}

void check_m(std::size_t M, std::size_t n, const char* what) {
    if (M < 1 || M > n)
        throw InputError(std::string(what) + ": subset size " + std::to_string(M) + " outside [1, " +
                         std::to_string(n) + "]");
}

}  // namespace

double principal_minor(const Matrix& K, const std::vector<std::size_t>& subset) {
    check_square(K, "principal_minor");
    for (const auto s : subset)
        if (s >= static_cast<std::size_t>(K.rows())) throw InputError("principal_minor: index out of range");
    return minor_with_scale(K, subset, diag_scale(K));
}

DppSample dpp_exact_sample(const Matrix& K, std::size_t M, Rng& rng) {
    check_square(K, "dpp_exact_sample");
    const auto n = static_cast<std::size_t>(K.rows());
    if (n > kExactDppMaxSize)
        throw InputError("dpp_exact_sample: " + std::to_string(n) + " candidates exceed the enumeration limit of " +
                         std::to_string(kExactDppMaxSize) + "; use dpp_mcmc_sample");
    check_m(M, n, "dpp_exact_sample");

    const double scale = diag_scale(K);
    std::vector<std::vector<std::size_t>> subsets;
    std::vector<double> weights;
    std::vector<std::size_t> c(M);
    std::iota(c.begin(), c.end(), std::size_t{0});
    do {
        subsets.push_back(c);
        weights.push_back(minor_with_scale(K, c, scale));
    } while (next_combination(c, n));

    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0))
        throw DegenerateError("dpp_exact_sample: every principal " + std::to_string(M) + "-minor is singular");

    const double u = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t pick = subsets.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] == 0.0) continue;
        acc += weights[i];
        pick = i;
        if (u < acc) break;
    }
    return {subsets[pick], std::log(weights[pick]), 0};
}

std::size_t default_mcmc_steps(std::size_t n) {
    if (n < 2) return 1;
    const double nd = static_cast<double>(n);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(10.0 * nd * std::log(nd))));
}

SwapChain::SwapChain(const Matrix& K, std::vector<std::size_t> members)
    : K_(&K), members_(std::move(members)), scale_(diag_scale(K)) {
    check_square(K, "SwapChain");
    for (const auto s : members_)
        if (s >= static_cast<std::size_t>(K.rows())) throw InputError("SwapChain: index out of range");
    refactor();
}

void SwapChain::refactor() {
    const Matrix S = principal(*K_, members_);
    updates_ = 0;
    log_det_ = pivoted_log_det(S, scale_);
    singular_ = !std::isfinite(log_det_);
    if (singular_) {
        inverse_.resize(0, 0);
        return;
    }
    inverse_ = S.llt().solve(Matrix::Identity(S.rows(), S.cols()));
}

double SwapChain::swap_ratio(std::size_t pos, std::size_t candidate) const {
    if (pos >= members_.size() || candidate >= static_cast<std::size_t>(K_->rows()))
        throw InputError("SwapChain::swap_ratio: index out of range");
    if (singular_) return std::numeric_limits<double>::infinity();

    const auto m = static_cast<Eigen::Index>(members_.size());
    const auto p = static_cast<Eigen::Index>(pos);
    const auto j = static_cast<Eigen::Index>(candidate);
    Vector v(m);
    for (Eigen::Index a = 0; a < m; ++a) v(a) = (*K_)(static_cast<Eigen::Index>(members_[static_cast<std::size_t>(a)]), j);
    v(p) = 0.0;
    const Vector av = inverse_ * v;
    // Schur complement of the candidate against the members that stay.
    const double schur = (*K_)(j, j) - v.dot(av) + av(p) * av(p) / inverse_(p, p);
    if (schur >= -kNegativePivot * scale_) return std::max(0.0, schur) * inverse_(p, p);

    // A clearly negative value means the inverse has lost its digits on a
    // near-dependent set; settle the move with a direct factorization.
    std::vector<std::size_t> proposed = members_;
    proposed[pos] = candidate;
    return std::exp(pivoted_log_det(principal(*K_, proposed), scale_) - log_det_);
}

void SwapChain::apply_swap(std::size_t pos, std::size_t candidate, double ratio) {
    const bool was_singular = singular_;
    const auto p = static_cast<Eigen::Index>(pos);
    const auto j = static_cast<Eigen::Index>(candidate);
    members_[pos] = candidate;
    if (was_singular || ++updates_ >= kRefactorEvery || !(ratio > 0.0)) {
        refactor();
        return;
    }

    // Remove the outgoing member: the rank-one downdate zeroes row/col p.
    const Vector a = inverse_.col(p);
    inverse_ -= a * a.transpose() / a(p);
    const auto m = static_cast<Eigen::Index>(members_.size());
    Vector v(m);
    for (Eigen::Index b = 0; b < m; ++b) v(b) = (*K_)(static_cast<Eigen::Index>(members_[static_cast<std::size_t>(b)]), j);
    v(p) = 0.0;
    // Insert the candidate at position p (block inverse with Schur complement s).
    const Vector u = inverse_ * v;
    const double s = (*K_)(j, j) - v.dot(u);
    if (!(s > kMinorTolerance * scale_)) {
        refactor();
        return;
    }
    inverse_.noalias() += u * u.transpose() / s;
    inverse_.col(p) = -u / s;
    inverse_.row(p) = -u.transpose() / s;
    inverse_(p, p) = 1.0 / s;
    log_det_ += std::log(ratio);
}

DppSample dpp_mcmc_sample(const Matrix& K, std::size_t M, std::size_t steps, Rng& rng) {
    check_square(K, "dpp_mcmc_sample");
    const auto n = static_cast<std::size_t>(K.rows());
    check_m(M, n, "dpp_mcmc_sample");
    if (steps < 1) throw InputError("dpp_mcmc_sample: steps must be >= 1");
    if (K.diagonal().minCoeff() < -kNegativePivot * diag_scale(K))
        throw NumericalError("dpp_mcmc_sample: kernel matrix has a negative diagonal entry");

    // Uniform initial subset via a partial Fisher-Yates shuffle.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < M; ++i) std::swap(perm[i], perm[i + uniform_index(n - i, rng)]);
    std::vector<std::size_t> inside(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(M));
    std::vector<std::size_t> outside(perm.begin() + static_cast<std::ptrdiff_t>(M), perm.end());

    SwapChain chain(K, inside);
    if (!outside.empty()) {
        for (std::size_t step = 0; step < steps; ++step) {
            const std::size_t pos = uniform_index(M, rng);
            const std::size_t slot = uniform_index(outside.size(), rng);
            const std::size_t candidate = outside[slot];
            const double ratio = chain.swap_ratio(pos, candidate);
            if (uniform01(rng) < std::min(1.0, ratio)) {
                outside[slot] = chain.members()[pos];
                chain.apply_swap(pos, candidate, ratio);
            }
        }
    }

    DppSample out;
    out.indices = chain.members();
    std::sort(out.indices.begin(), out.indices.end());
    out.log_det = chain.log_det();
    out.chain_steps = steps;
    return out;
}

std::vector<std::size_t> greedy_residual_select(const Matrix& K, std::size_t M) {
    check_square(K, "greedy_residual_select");
    const auto n = static_cast<Eigen::Index>(K.rows());
    check_m(M, static_cast<std::size_t>(n), "greedy_residual_select");

    Vector residual = K.diagonal();
    Matrix L = Matrix::Zero(n, static_cast<Eigen::Index>(M));
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    std::vector<std::size_t> picked;
    const double floor = kMinorTolerance * diag_scale(K);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(M); ++k) {
        Eigen::Index best = -1;
        for (Eigen::Index i = 0; i < n; ++i)
            if (!taken[static_cast<std::size_t>(i)] && (best < 0 || residual(i) > residual(best))) best = i;
        taken[static_cast<std::size_t>(best)] = true;
        picked.push_back(static_cast<std::size_t>(best));
        if (residual(best) <= floor) continue;
        Vector col = K.col(best) - L.leftCols(k) * L.row(best).head(k).transpose();
        col /= std::sqrt(residual(best));
        L.col(k) = col;
        residual -= col.cwiseAbs2();
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

SparseSelection select_subset(const Matrix& K, std::size_t M, Rng& rng, const SelectOptions& options) {
    check_square(K, "select_subset");
    const auto n = static_cast<std::size_t>(K.rows());
    if (M < 1) throw InputError("select_subset: subset size must be >= 1");

    SparseSelection sel;
    if (M >= n) {
        sel.sample.indices.resize(n);
        std::iota(sel.sample.indices.begin(), sel.sample.indices.end(), std::size_t{0});
        const double det = principal_minor(K, sel.sample.indices);
        sel.sample.log_det = det > 0.0 ? std::log(det) : -std::numeric_limits<double>::infinity();
        sel.method = SelectionMethod::All;
        return sel;
    }
    try {
        if (n <= options.exact_max) {
            sel.sample = dpp_exact_sample(K, M, rng);
            sel.method = SelectionMethod::Exact;
        } else {
            sel.sample = dpp_mcmc_sample(K, M, options.mcmc_steps.value_or(default_mcmc_steps(n)), rng);
            sel.method = SelectionMethod::Mcmc;
            if (!std::isfinite(sel.sample.log_det)) throw DegenerateError("select_subset: chain ended on a singular subset");
        }
    } catch (const DegenerateError&) {
        sel.sample.indices = greedy_residual_select(K, M);
        const double det = principal_minor(K, sel.sample.indices);
        sel.sample.log_det = det > 0.0 ? std::log(det) : -std::numeric_limits<double>::infinity();
        sel.sample.chain_steps = 0;
        sel.method = SelectionMethod::Greedy;
    }
    return sel;
}

}  // namespace sparq
