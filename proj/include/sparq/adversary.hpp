#pragma once

#include <cstddef>
#include <vector>

#include "sparq/types.hpp"

namespace sparq {

/// Nodes of the trapezoid rule over the bump's frequency support [-1, 1].
inline constexpr std::size_t kBumpQuadratureNodes = 4096;

/// H(xi) = exp(-1 / (1 - xi^2)) on |xi| < 1, zero elsewhere.
double bump_spectrum(double xi);

/// h(x) = integral of H(xi) cos(2 pi xi x) over [-1, 1], by the trapezoid rule.
double bump_profile(double x, std::size_t nodes = kBumpQuadratureNodes);

/// First x > 0 with h(x) = h(0)/2: coarse scan, then bisection.
double bump_half_radius(std::size_t nodes = kBumpQuadratureNodes);

/// floor(sqrt(log(B (2 pi l^2)^{1/4} h0 / (2 gamma))) / (l pi zeta)) for d = 1;
/// 0 when the logarithm is not positive.
long adversary_count(double gamma, double rkhs_bound, double lengthscale, double h0, double zeta);

/// M translated bumps f^m(x) = (2 gamma / h(0)) h((x - c_m) / w), each peaking
/// at 2 gamma in the middle of its own cell of [lo, hi].
struct AdversaryFamily {
    int dim = 1;
    double gamma = 0.0;
    double rkhs_bound = 0.0;
    double lengthscale = 0.0;
    long count = 0;
    double lo = -1.0;
    double hi = 1.0;
    double cell_width = 0.0;
    std::vector<double> peaks;

    double h0 = 0.0;
    double zeta = 0.0;
    double log_term = 0.0;    ///< log(B (2 pi l^2)^{1/4} h0 / (2 gamma))
    double bump_width = 0.0;  ///< w = pi l / sqrt(log_term)
    double amplitude = 0.0;   ///< 2 gamma / h0
    /// Quadrature estimate of each member's RKHS norm under the unit-amplitude SE kernel.
    double rkhs_norm = 0.0;

    /// h sampled at spacing profile_step on [0, profile_step * (n - 1)].
    double profile_step = 0.0;
    std::vector<double> profile_samples;

    /// h(u), interpolated from the samples (direct quadrature past their end).
    double profile(double u) const;
    double member(std::size_t m, double x) const;
    /// Cell holding x, clamped to [0, count).
    std::size_t cell_of(double x) const;
};

/// Throws InputError unless d == 1 and inputs are positive, ConfigError
/// when gamma is too large for at least two members.
AdversaryFamily build_adversary(int d, double gamma, double rkhs_bound, double lengthscale, double lo = -1.0,
                                double hi = 1.0);

struct AdversaryCheck {
    double max_peak_rel_error = 0.0;
    /// Largest value of any member inside another member's cell.
    double max_cross_cell = 0.0;
    bool separated = false;
    bool norm_within_bound = false;
};

/// Dense scan of the family over its domain.
AdversaryCheck check_adversary(const AdversaryFamily& family, std::size_t scan_points = 20001);

}  // namespace sparq
