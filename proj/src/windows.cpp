#include "sparq/windows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparq/types.hpp"

namespace sparq {

long window_length(long t, double alpha, double alpha_tilde) {
    if (!(alpha > 0.0)) throw ConfigError("window rule needs alpha > 0");
    if (t < 1) throw InputError("window_length: t must be >= 1");
    const long double ratio = static_cast<long double>(alpha_tilde) / static_cast<long double>(alpha);
    const long double p = std::pow(static_cast<long double>(t), ratio);
    long double fl = std::floor(p);
    // pow may land a few ulps below an exact integer power (16^0.25 -> 1.999...).
    const long double up = fl + 1.0L;
    if (up - p <= 16.0L * std::numeric_limits<long double>::epsilon() * up) fl = up;
    return static_cast<long>(fl) + 1;
}

WindowPlan plan_windows(double alpha, double alpha_tilde, long t_start, long horizon) {
    if (!(alpha > 0.0)) throw ConfigError("plan_windows: alpha must be > 0 (window ratio undefined)");
    if (!(alpha_tilde >= 0.0) || alpha_tilde > alpha)
        throw ConfigError("plan_windows: alpha_tilde must lie in [0, alpha]");
    if (t_start < 1) throw InputError("plan_windows: t_start must be >= 1");
    if (horizon < t_start) throw InputError("plan_windows: horizon must be >= t_start");

    WindowPlan plan;
    plan.horizon = horizon;
    for (long t = t_start; t <= horizon; t += window_length(t, alpha, alpha_tilde)) plan.starts.push_back(t);
    return plan;
}

bool WindowPlan::is_start(long t) const { return std::binary_search(starts.begin(), starts.end(), t); }

long WindowPlan::window_start(long t) const {
    if (starts.empty() || t < starts.front() || t > horizon) throw InputError("WindowPlan: step outside the plan");
    return *(std::upper_bound(starts.begin(), starts.end(), t) - 1);
}

long WindowPlan::window_end(long t) const {
    window_start(t);
    const auto it = std::upper_bound(starts.begin(), starts.end(), t);
    return it == starts.end() ? horizon + 1 : *it;
}

}  // namespace sparq
