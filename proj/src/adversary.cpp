#include "sparq/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sparq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kProfileStep = 1.0 / 512.0;
constexpr double kProfileExtent = 40.0;
constexpr double kScanEnd = 20.0;
constexpr double kScanStep = 0.01;

// Trapezoid rule for the integral of g over [-1, 1]; H vanishes at both ends.
template <class F>
double trapezoid(F&& g, std::size_t nodes) {
    if (nodes < 3) throw InputError("bump quadrature needs at least 3 nodes");
    const double h = 2.0 / static_cast<double>(nodes - 1);
    double s = 0.5 * (g(-1.0) + g(1.0));
    for (std::size_t k = 1; k + 1 < nodes; ++k) s += g(-1.0 + h * static_cast<double>(k));
    return s * h;
}

}  // namespace

double bump_spectrum(double xi) {
    const double r = 1.0 - xi * xi;
    return r > 0.0 ? std::exp(-1.0 / r) : 0.0;
}

double bump_profile(double x, std::size_t nodes) {
    return trapezoid([x](double xi) { return bump_spectrum(xi) * std::cos(2.0 * kPi * xi * x); }, nodes);
}

double bump_half_radius(std::size_t nodes) {
    const double half = 0.5 * bump_profile(0.0, nodes);
    double a = 0.0;
    for (double b = kScanStep; b <= kScanEnd; b += kScanStep) {
        if (bump_profile(b, nodes) < half) {
            for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
                const double m = 0.5 * (a + b);
                (bump_profile(m, nodes) < half ? b : a) = m;
            }
            return 0.5 * (a + b);
        }
        a = b;
    }
    throw NumericalError("bump_half_radius: no half-height crossing found");
}

long adversary_count(double gamma, double rkhs_bound, double lengthscale, double h0, double zeta) {
    const double L = std::log(rkhs_bound * std::pow(2.0 * kPi * lengthscale * lengthscale, 0.25) * h0 / (2.0 * gamma));
    if (!(L > 0.0)) return 0;
    return static_cast<long>(std::floor(std::sqrt(L) / (lengthscale * kPi * zeta)));
}

double AdversaryFamily::profile(double u) const {
    const double a = std::abs(u);
    const double pos = a / profile_step;
    const auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= profile_samples.size()) return bump_profile(a);
    const double frac = pos - static_cast<double>(k);
    return (1.0 - frac) * profile_samples[k] + frac * profile_samples[k + 1];
}

double AdversaryFamily::member(std::size_t m, double x) const {
    if (m >= peaks.size()) throw InputError("AdversaryFamily::member: index out of range");
    return amplitude * profile((x - peaks[m]) / bump_width);
}

std::size_t AdversaryFamily::cell_of(double x) const {
    const double c = std::floor((x - lo) / cell_width);
    return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(count - 1)));
}

AdversaryFamily build_adversary(int d, double gamma, double rkhs_bound, double lengthscale, double lo, double hi) {
    if (d != 1) throw InputError("build_adversary: only d = 1 is supported");
    if (!(gamma > 0.0) || !(rkhs_bound > 0.0) || !(lengthscale > 0.0))
        throw InputError("build_adversary: gamma, B and l must be positive");
    if (!(hi > lo)) throw InputError("build_adversary: empty domain");

    AdversaryFamily f;
    f.gamma = gamma;
    f.rkhs_bound = rkhs_bound;
    f.lengthscale = lengthscale;
    f.lo = lo;
    f.hi = hi;
    f.h0 = bump_profile(0.0);
    f.zeta = bump_half_radius();
    f.log_term = std::log(rkhs_bound * std::pow(2.0 * kPi * lengthscale * lengthscale, 0.25) * f.h0 / (2.0 * gamma));
    f.count = adversary_count(gamma, rkhs_bound, lengthscale, f.h0, f.zeta);
    if (f.count < 2)
        throw ConfigError("build_adversary: gamma=" + std::to_string(gamma) + " leaves fewer than two members for B=" +
                          std::to_string(rkhs_bound) + ", l=" + std::to_string(lengthscale));
    f.bump_width = kPi * lengthscale / std::sqrt(f.log_term);
    f.amplitude = 2.0 * gamma / f.h0;
    f.cell_width = (hi - lo) / static_cast<double>(f.count);
    for (long m = 0; m < f.count; ++m) f.peaks.push_back(lo + (static_cast<double>(m) + 0.5) * f.cell_width);

    f.profile_step = kProfileStep;
    const auto n = static_cast<std::size_t>(kProfileExtent / kProfileStep) + 1;
    f.profile_samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) f.profile_samples[k] = bump_profile(static_cast<double>(k) * kProfileStep);

    // Fourier-side norm: |g|^2 = a^2 w / (sqrt(2 pi) l) * int H(u)^2 exp(2 pi^2 l^2 u^2 / w^2) du.
    const double expo = 2.0 * kPi * kPi * lengthscale * lengthscale / (f.bump_width * f.bump_width);
    const double integral = trapezoid(
        [expo](double u) {
            const double r = 1.0 - u * u;
            return r > 0.0 ? std::exp(-2.0 / r + expo * u * u) : 0.0;
        },
        kBumpQuadratureNodes);
    f.rkhs_norm = std::sqrt(f.amplitude * f.amplitude * f.bump_width / (std::sqrt(2.0 * kPi) * lengthscale) * integral);
    return f;
}

AdversaryCheck check_adversary(const AdversaryFamily& family, std::size_t scan_points) {
    if (scan_points < 2) throw InputError("check_adversary: need at least two scan points");
    AdversaryCheck out;
    std::vector<double> member_max(family.peaks.size(), 0.0);
    const double step = (family.hi - family.lo) / static_cast<double>(scan_points - 1);
    for (std::size_t k = 0; k < scan_points; ++k) {
        const double x = family.lo + step * static_cast<double>(k);
        const std::size_t cell = family.cell_of(x);
        for (std::size_t m = 0; m < family.peaks.size(); ++m) {
            const double v = family.member(m, x);
            member_max[m] = std::max(member_max[m], v);
            if (m != cell) out.max_cross_cell = std::max(out.max_cross_cell, v);
        }
    }
    for (std::size_t m = 0; m < family.peaks.size(); ++m) {
        const double peak = std::max(member_max[m], family.member(m, family.peaks[m]));
        out.max_peak_rel_error =
            std::max(out.max_peak_rel_error, std::abs(peak - 2.0 * family.gamma) / (2.0 * family.gamma));
    }
    out.separated = out.max_cross_cell <= family.gamma * (1.0 + 1e-9);
    out.norm_within_bound = family.rkhs_norm <= family.rkhs_bound * 1.05;
    return out;
}

}  // namespace sparq
