#pragma once

#include <cstddef>
#include <limits>
#include <string>

#include "sparq/kernel.hpp"
#include "sparq/policy.hpp"

namespace sparq {

/// A time-varying objective f_t observed through Gaussian noise.
/// true_value is for regret accounting only and never reaches a policy.
class Environment {
public:
    explicit Environment(double sigma_sq);
    virtual ~Environment() = default;

    virtual int dim() const = 0;
    virtual double true_value(const Vector& x, long t) const = 0;
    virtual Vector true_values(const Points& X, long t) const;
    /// Largest supported step.
    virtual long max_time() const { return std::numeric_limits<long>::max(); }

    double sigma_sq() const { return sigma_sq_; }

    /// f_t(x) + N(0, sigma_sq).
    double observe(const Vector& x, long t, Rng& rng) const;

    /// Fresh noisy evaluations of f_t at every row of X; counts |X| queries.
    Vector expert_query(const Points& X, long t, Rng& rng);
    std::size_t query_count() const { return queries_; }

protected:
    void check_time(long t) const;

private:
    double sigma_sq_;
    std::size_t queries_ = 0;
};

/// f_t(x) = sum_i a_i(t) k(x, c_i) with u_i(t) = sin(freq t + i) and
/// a(t) = (B / lambda_max) u(t) / |u(t)|, lambda_max the top eigenvalue of K_C.
class SyntheticRkhsEnv : public Environment {
public:
    SyntheticRkhsEnv(Points centers, KernelSpec kernel, double norm_bound, double time_freq, double sigma_sq);

    /// Centers evenly spaced over [lo, hi] (both ends included).
    static SyntheticRkhsEnv uniform_1d(double lo, double hi, int n_centers, KernelSpec kernel, double norm_bound,
                                       double time_freq, double sigma_sq);

    int dim() const override { return kernel_.dim; }
    double true_value(const Vector& x, long t) const override;
    Vector true_values(const Points& X, long t) const override;

    Vector coefficients(long t) const;
    /// a(t)^T K_C a(t); at most B^2 / lambda_max.
    double rkhs_norm_sq(long t) const;
    double lambda_max() const { return lambda_max_; }
    const Points& centers() const { return centers_; }
    const KernelSpec& kernel() const { return kernel_; }
    double norm_bound() const { return norm_bound_; }

private:
    Points centers_;
    KernelSpec kernel_;
    double norm_bound_;
    double time_freq_;
    Matrix gram_;
    double lambda_max_ = 0.0;
};

/// Index of the row of `grid` closest to x; lowest index on ties.
std::size_t nearest_index(const Points& grid, const Vector& x);

/// Values on a grid performing a random walk with i.i.d. Uniform(-s, s)
/// increments per point and step, s = sigma_sq. The path is drawn up front.
class BrownianDriftEnv : public Environment {
public:
    BrownianDriftEnv(Points grid, Vector initial, double sigma_sq, long horizon, Rng& drift_rng);

    int dim() const override { return static_cast<int>(grid_.cols()); }
    double true_value(const Vector& x, long t) const override;
    Vector true_values(const Points& X, long t) const override;
    long max_time() const override { return static_cast<long>(path_.rows()) - 1; }

    const Points& grid() const { return grid_; }
    /// Row t holds f_t on the grid; row 0 is the initial state.
    const Matrix& path() const { return path_; }

private:
    Points grid_;
    Matrix path_;
};

/// Monte-Carlo estimate of Var[f_t2(x) - f_t1(x)] for the drift of `env`,
/// from `paths` independent replicas of the increments.
double drift_increment_check(const BrownianDriftEnv& env, long t1, long t2, std::size_t paths, Rng& rng);

/// Objective values read from a gridded time series; step t uses the t-th
/// timestep of the file. Off-grid points use the nearest grid point.
class GridSeriesEnv : public Environment {
public:
    GridSeriesEnv(Points grid, Matrix values, double sigma_sq);

    int dim() const override { return static_cast<int>(grid_.cols()); }
    double true_value(const Vector& x, long t) const override;
    Vector true_values(const Points& X, long t) const override;
    long max_time() const override { return static_cast<long>(values_.rows()); }

    const Points& grid() const { return grid_; }
    /// Time-major: row t-1 holds step t.
    const Matrix& values() const { return values_; }

private:
    Points grid_;
    Matrix values_;
};

/// Reads a CSV with header `t,x1,...,xd,value`. Every timestep must list
/// the same complete grid and timesteps must be consecutive integers.
/// Throws ConfigError on malformed files.
GridSeriesEnv load_grid_series_csv(const std::string& path, double sigma_sq);

struct Optimum {
    std::size_t index = 0;
    Vector point;
    double value = 0.0;
};

/// Best candidate under f_t; lowest index on ties.
Optimum env_optimum(const Environment& env, long t, const Points& candidates);

/// Routes a policy's expert queries to an environment and rng stream.
class EnvironmentExpert : public Expert {
public:
    EnvironmentExpert(Environment& env, Rng& rng) : env_(&env), rng_(&rng) {}
    Vector query(const Points& X, long t) override { return env_->expert_query(X, t, *rng_); }

private:
    Environment* env_;
    Rng* rng_;
};

}  // namespace sparq
