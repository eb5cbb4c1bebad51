#include "sparq/budget.hpp"

#include <algorithm>
#include <cmath>

#include "sparq/types.hpp"

namespace sparq {

std::size_t query_budget(long t, int d, double c, std::size_t available) {
    if (t < 1) throw InputError("query_budget: t must be >= 1");
    if (d < 1) throw InputError("query_budget: d must be >= 1");
    if (!(c > 0.0)) throw InputError("query_budget: c must be positive");
    const double raw = c * std::pow(std::log(static_cast<double>(t)), d);
    // Absorb roundoff so that an exact integer is not bumped up by ceil.
    const double rounded = std::ceil(raw - 1e-12 * std::max(1.0, raw));
    const auto budget = static_cast<std::size_t>(std::max(1.0, rounded));
    return std::min(budget, available);
}

}  // namespace sparq
