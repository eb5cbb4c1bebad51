#include "sparq/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace sparq {

std::vector<double> cumulative_regret(const RunTrace& trace) {
    if (trace.steps.empty()) throw InputError("cumulative_regret: empty trace");
    std::vector<double> out;
    out.reserve(trace.steps.size());
    double acc = 0.0;
    for (const auto& s : trace.steps) {
        acc += s.regret;
        out.push_back(acc);
    }
    return out;
}

std::string overlay_name(OverlayKind kind) {
    switch (kind) {
        case OverlayKind::BanditUpper:
            return "BANDIT_UPPER";
        case OverlayKind::WSparqUpper:
            return "WSPARQ_UPPER";
        case OverlayKind::BanditLowerSmall:
            return "BANDIT_LOWER_SMALL";
        case OverlayKind::BanditLowerLarge:
            return "BANDIT_LOWER_LARGE";
    }
    return "UNKNOWN";
}

OverlayKind parse_overlay(const std::string& name) {
    std::string key;
    for (const char c : name) key += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (const auto k : {OverlayKind::BanditUpper, OverlayKind::WSparqUpper, OverlayKind::BanditLowerSmall,
                         OverlayKind::BanditLowerLarge})
        if (overlay_name(k) == key) return k;
    throw ConfigError("unknown overlay kind '" + name + "'");
}

double overlay_rate(OverlayKind kind, const OverlayParams& p, double T) {
    if (!(T >= 1.0)) throw InputError("bound_overlay: horizons must be >= 1");
    if (p.d < 1) throw InputError("bound_overlay: d must be >= 1");
    const double d = p.d;
    const double lg = std::log(T);
    switch (kind) {
        case OverlayKind::BanditUpper:
            return std::sqrt(d * d * std::pow(T, 3.0 * p.alpha + 1.0) * std::pow(lg, 2.0 * (d + 1.0)));
        case OverlayKind::WSparqUpper: {
            const double logs = std::pow(lg, d + 1.0);
            return std::pow(T, 2.0 * p.alpha_tilde + 1.0) * d * logs *
                   (std::log(1.0 / p.delta) + d * std::pow(T, p.alpha_tilde) * logs);
        }
        case OverlayKind::BanditLowerSmall:
            return std::sqrt(std::pow(T, p.alpha + 1.0));
        case OverlayKind::BanditLowerLarge:
            return T;
    }
    return 0.0;
}

std::vector<double> bound_overlay(OverlayKind kind, const OverlayParams& params, const std::vector<double>& horizons) {
    std::vector<double> out;
    out.reserve(horizons.size());
    for (const double T : horizons) out.push_back(params.c * overlay_rate(kind, params, T));
    return out;
}

double calibrate_overlay_constant(OverlayKind kind, const OverlayParams& params, double T_ref, double measured) {
    const double rate = overlay_rate(kind, params, T_ref);
    return rate > 0.0 ? measured / rate : 0.0;
}

double info_sum(const std::vector<double>& n, long tau, double alpha, double sigma_sq) {
    if (tau < 0 || static_cast<std::size_t>(tau) > n.size()) throw InputError("info_sum: tau exceeds the query history");
    if (!(sigma_sq > 0.0)) throw InputError("info_sum: sigma_sq must be > 0");
    double s = 0.0;
    for (long t = 1; t <= tau; ++t) {
        const double nt = n[static_cast<std::size_t>(t - 1)];
        if (nt < 0.0) throw InputError("info_sum: query counts must be >= 0");
        const long gap = tau - t;
        const double inflation = gap == 0 ? 1.0 : 1.0 + std::pow(static_cast<double>(gap), alpha);
        s += nt / (sigma_sq * inflation);
    }
    return s;
}

double fano_error_bound(long M, double kl_sum) {
    if (M < 2) throw InputError("fano_error_bound: M must be >= 2");
    if (!(kl_sum >= 0.0)) throw InputError("fano_error_bound: kl_sum must be >= 0");
    const double m = static_cast<double>(M);
    return std::max(0.0, 1.0 - (kl_sum / (m * m) + std::log(2.0)) / std::log(m));
}

double kl_sum_bound(double gamma, long M, double inv_var_sum, double C1) {
    if (gamma < 0.0 || M < 0 || inv_var_sum < 0.0 || C1 < 0.0) throw InputError("kl_sum_bound: inputs must be >= 0");
    return C1 * static_cast<double>(M) * gamma * gamma * inv_var_sum;
}

double window_objective(double L, double alpha, long T) {
    return std::pow(L, -alpha) + 4.0 * L / static_cast<double>(T);
}

CriticalWindow critical_window(double alpha, long T) {
    if (!(alpha > 0.0)) throw InputError("critical_window: alpha must be > 0");
    if (T < 1) throw InputError("critical_window: T must be >= 1");
    const double e = 1.0 / (alpha + 1.0);
    const double Td = static_cast<double>(T);
    CriticalWindow cw;
    cw.l_star = std::pow(alpha / 8.0, e) * std::pow(Td, e);
    cw.f_star = window_objective(cw.l_star, alpha, T);
    cw.l_stationary = std::pow(alpha * Td / 4.0, e);
    cw.f_stationary = window_objective(cw.l_stationary, alpha, T);
    for (long L = 1; L <= T / 2; ++L) {
        const double f = window_objective(static_cast<double>(L), alpha, T);
        if (cw.best_integer == 0 || f < cw.f_best_integer) {
            cw.best_integer = L;
            cw.f_best_integer = f;
        }
    }
    if (cw.best_integer > 0) {
        const auto lo = static_cast<long>(std::floor(cw.l_stationary));
        const auto hi = static_cast<long>(std::ceil(cw.l_stationary));
        // The stationary point may lie beyond T/2, where the scan is clamped.
        cw.scan_brackets_stationary = cw.best_integer == lo || cw.best_integer == hi ||
                                      (lo > T / 2 && cw.best_integer == T / 2) || (hi < 1 && cw.best_integer == 1);
    }
    return cw;
}

double bandit_inv_var_sum(double alpha, long T, double sigma_sq) {
    if (T < 1) throw InputError("bandit_inv_var_sum: T must be >= 1");
    return info_sum(std::vector<double>(static_cast<std::size_t>(T), 1.0), T, alpha, sigma_sq);
}

NecessityReport necessity_check(double alpha, long T, long N_T, double sigma_sq) {
    if (!(alpha > 1.0)) throw InputError("necessity_check: the query-necessity result needs alpha > 1");
    if (T < 1 || N_T < 0) throw InputError("necessity_check: need T >= 1 and N_T >= 0");
    NecessityReport r;
    r.bandit_inv_var_sum = bandit_inv_var_sum(alpha, T, sigma_sq);
    const CriticalWindow cw = critical_window(alpha, T);
    r.l_star = cw.l_star;
    r.info_cap = static_cast<double>(N_T) * cw.f_star / sigma_sq;
    r.threshold = std::pow(static_cast<double>(T), alpha / (alpha + 1.0));
    r.above_threshold = static_cast<double>(N_T) > r.threshold;
    std::ostringstream v;
    if (r.above_threshold)
        v << "above threshold: N_T=" << N_T << " exceeds T^{a/(a+1)}=" << r.threshold;
    else
        v << "at or below threshold: N_T=" << N_T << " <= T^{a/(a+1)}=" << r.threshold
          << "; sublinear regret cannot be guaranteed";
    r.verdict = v.str();
    if (alpha < 1.1)
        r.note = "alpha is close to 1; the lower-bound argument only covers alpha > 1 and constants degrade near 1";
    return r;
}

}  // namespace sparq
