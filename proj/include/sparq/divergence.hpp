#pragma once

#include "sparq/posterior.hpp"

namespace sparq {

/// Diagonal jitter added to both marginal covariances.
inline constexpr double kKlJitter = 1e-9;

/// KL(P || Q) between the joint Gaussian marginals of two posteriors on a
/// finite grid of points.
double finite_kl(const Posterior& p, const Posterior& q, const Points& grid);

}  // namespace sparq
