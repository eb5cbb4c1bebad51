#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sparq/types.hpp"

namespace sparq {

/// A size-M subset drawn from an M-DPP.
struct DppSample {
    std::vector<std::size_t> indices;  ///< strictly increasing
    double log_det = 0.0;              ///< log det of the selected principal submatrix
    std::size_t chain_steps = 0;       ///< 0 for exact sampling
};

/// Largest candidate set the enumerating sampler accepts.
inline constexpr std::size_t kExactDppMaxSize = 15;

/// Draws Z with probability det(K_ZZ) / sum_{|Z'|=M} det(K_Z'Z') by full
/// enumeration. Throws InputError when n > kExactDppMaxSize and
/// DegenerateError when every principal M-minor vanishes.
DppSample dpp_exact_sample(const Matrix& K, std::size_t M, Rng& rng);

/// Swap-chain Metropolis sampler started from a uniform M-subset.
DppSample dpp_mcmc_sample(const Matrix& K, std::size_t M, std::size_t steps, Rng& rng);

/// ceil(10 n ln n), at least 1.
std::size_t default_mcmc_steps(std::size_t n);

/// Picks M indices one at a time, each maximizing the current Nystrom
/// residual (pivoted Cholesky). Deterministic; ties go to the lowest index.
std::vector<std::size_t> greedy_residual_select(const Matrix& K, std::size_t M);

/// det(K_ZZ) with non-positive or negligible values reported as 0.
double principal_minor(const Matrix& K, const std::vector<std::size_t>& subset);

enum class SelectionMethod { All, Exact, Mcmc, Greedy };

struct SparseSelection {
    DppSample sample;
    SelectionMethod method = SelectionMethod::All;
};

struct SelectOptions {
    std::optional<std::size_t> mcmc_steps;  ///< default_mcmc_steps(n) when unset
    std::size_t exact_max = kExactDppMaxSize;
};

/// Routing used by the policies: every index when M >= n, the exact sampler
/// up to exact_max candidates, the swap chain above that, and greedy residual
/// selection whenever the DPP degenerates.
SparseSelection select_subset(const Matrix& K, std::size_t M, Rng& rng, const SelectOptions& options = {});

/// Incremental state of the swap chain over principal submatrices of K.
/// Keeps (K_ZZ)^{-1} so a swap's determinant ratio costs O(M^2).
class SwapChain {
public:
    SwapChain(const Matrix& K, std::vector<std::size_t> members);

    const std::vector<std::size_t>& members() const { return members_; }
    bool singular() const { return singular_; }
    double log_det() const { return log_det_; }

    /// det(K_Z'Z') / det(K_ZZ) where Z' replaces members()[pos] by
    /// `candidate`. +inf while the current state is singular.
    double swap_ratio(std::size_t pos, std::size_t candidate) const;

    /// Applies the swap; `ratio` must come from swap_ratio for the same move.
    void apply_swap(std::size_t pos, std::size_t candidate, double ratio);

private:
    void refactor();

    const Matrix* K_;
    std::vector<std::size_t> members_;
    Matrix inverse_;
    bool singular_ = false;
    double log_det_ = 0.0;
    double scale_ = 1.0;
    std::size_t updates_ = 0;
};

}  // namespace sparq
