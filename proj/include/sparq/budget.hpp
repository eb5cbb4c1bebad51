#pragma once

#include <cstddef>

namespace sparq {

/// Expert queries at step t: max(1, ceil(c (ln t)^d)), capped at the number
/// of past inputs available for re-query.
std::size_t query_budget(long t, int d, double c, std::size_t available);

}  // namespace sparq
