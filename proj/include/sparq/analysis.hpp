#pragma once

#include <string>
#include <vector>

#include "sparq/trace.hpp"

namespace sparq {

/// Prefix sums of the per-step regret.
std::vector<double> cumulative_regret(const RunTrace& trace);

// ---------------------------------------------------------------------------
// Rate overlays. These are c times an asymptotic rate, drawn for shape
// comparison only; they are not certified bounds.

enum class OverlayKind { BanditUpper, WSparqUpper, BanditLowerSmall, BanditLowerLarge };

std::string overlay_name(OverlayKind kind);
OverlayKind parse_overlay(const std::string& name);

struct OverlayParams {
    double c = 1.0;
    double alpha = 1.0;
    double alpha_tilde = 0.25;
    int d = 1;
    double delta = 0.1;
};

/// Rate without the constant, at horizon T >= 1.
double overlay_rate(OverlayKind kind, const OverlayParams& params, double T);
std::vector<double> bound_overlay(OverlayKind kind, const OverlayParams& params, const std::vector<double>& horizons);

/// c such that the overlay passes through (T_ref, measured); 0 if the rate vanishes there.
double calibrate_overlay_constant(OverlayKind kind, const OverlayParams& params, double T_ref, double measured);

// ---------------------------------------------------------------------------
// Lower-bound diagnostics.

/// sum_{t <= tau} n_t / (sigma_sq (1 + (tau - t)^alpha)), n[0] holding step 1.
/// A zero gap contributes n_tau / sigma_sq.
double info_sum(const std::vector<double>& n, long tau, double alpha, double sigma_sq);

/// max(0, 1 - (kl_sum / M^2 + ln 2) / ln M); M >= 2.
double fano_error_bound(long M, double kl_sum);

/// C1 * M * gamma^2 * inv_var_sum.
double kl_sum_bound(double gamma, long M, double inv_var_sum, double C1 = 1.0);

struct CriticalWindow {
    /// Closed form (alpha/8)^{1/(alpha+1)} T^{1/(alpha+1)} and F there.
    double l_star = 0.0;
    double f_star = 0.0;
    /// Stationary point (alpha T / 4)^{1/(alpha+1)} of F and F there.
    double l_stationary = 0.0;
    double f_stationary = 0.0;
    /// Best integer L in [1, T/2] by direct scan (0 when T < 2).
    long best_integer = 0;
    double f_best_integer = 0.0;
    /// Whether floor/ceil of l_stationary contains best_integer.
    bool scan_brackets_stationary = false;
};

/// F(L) = L^{-alpha} + 4 L / T.
double window_objective(double L, double alpha, long T);
CriticalWindow critical_window(double alpha, long T);

struct NecessityReport {
    double bandit_inv_var_sum = 0.0;
    double l_star = 0.0;
    /// N_T F(L*) / sigma_sq: information available in a sparse window.
    double info_cap = 0.0;
    double threshold = 0.0;  ///< T^{alpha/(alpha+1)}
    bool above_threshold = false;
    std::string verdict;
    std::string note;
};

/// Requires alpha > 1. Purely diagnostic.
NecessityReport necessity_check(double alpha, long T, long N_T, double sigma_sq);

/// sum_{t <= T} 1 / (sigma_sq (1 + (T - t)^alpha)).
double bandit_inv_var_sum(double alpha, long T, double sigma_sq);

}  // namespace sparq
