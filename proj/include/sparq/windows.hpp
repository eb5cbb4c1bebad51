#pragma once

#include <cstddef>
#include <vector>

namespace sparq {

/// Window starts t_1 < t_2 < ... of the sliding re-query schedule. Each
/// window [t_j, t_{j+1}) has length floor(t_j^{alpha_tilde/alpha}) + 1, the
/// only integer L with t_j^r < L <= t_j^r + 1.
struct WindowPlan {
    std::vector<long> starts;
    long horizon = 0;

    bool is_start(long t) const;
    /// Start of the window containing t (t_1 <= t <= horizon).
    long window_start(long t) const;
    /// One past the last step of the window containing t.
    long window_end(long t) const;
};

/// floor(t^ratio) + 1, robust to roundoff when t^ratio is an exact integer.
long window_length(long t, double alpha, double alpha_tilde);

/// Throws ConfigError when alpha <= 0 or alpha_tilde is outside [0, alpha],
/// InputError when t_start < 1 or horizon < t_start.
WindowPlan plan_windows(double alpha, double alpha_tilde, long t_start, long horizon);

}  // namespace sparq
