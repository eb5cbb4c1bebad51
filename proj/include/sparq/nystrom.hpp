#pragma once

#include <cstddef>
#include <span>

#include "sparq/kernel.hpp"

namespace sparq {

/// Relative singular-value cutoff of the K_SS pseudo-inverse.
inline constexpr double kPinvCutoff = 1e-10;

/// tr(K_XX - K_XS K_SS^+ K_SX) for the subset S of rows of X, given by
/// index. Roundoff negatives are clipped to 0.
double nystrom_residual_trace(const Points& X, std::span<const std::size_t> subset, const KernelSpec& spec);

/// Same quantity from a precomputed Gram matrix of X.
double nystrom_residual_trace(const Matrix& gram, std::span<const std::size_t> subset);

}  // namespace sparq
