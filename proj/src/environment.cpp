#include "sparq/environment.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace sparq {

Environment::Environment(double sigma_sq) : sigma_sq_(sigma_sq) {
    if (!(sigma_sq >= 0.0) || !std::isfinite(sigma_sq)) throw InputError("environment: sigma_sq must be >= 0");
}

void Environment::check_time(long t) const {
    if (t < 0 || t > max_time())
        throw InputError("environment: step " + std::to_string(t) + " outside [0, " + std::to_string(max_time()) + "]");
}

Vector Environment::true_values(const Points& X, long t) const {
    Vector out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = true_value(X.row(i).transpose(), t);
    return out;
}

double Environment::observe(const Vector& x, long t, Rng& rng) const {
    return true_value(x, t) + std::sqrt(sigma_sq_) * standard_normal(rng);
}

Vector Environment::expert_query(const Points& X, long t, Rng& rng) {
    Vector out = true_values(X, t);
    const double sd = std::sqrt(sigma_sq_);
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += sd * standard_normal(rng);
    queries_ += static_cast<std::size_t>(X.rows());
    return out;
}

SyntheticRkhsEnv::SyntheticRkhsEnv(Points centers, KernelSpec kernel, double norm_bound, double time_freq,
                                   double sigma_sq)
    : Environment(sigma_sq), centers_(std::move(centers)), kernel_(kernel), norm_bound_(norm_bound),
      time_freq_(time_freq) {
    kernel_.validate();
    if (centers_.rows() < 1) throw InputError("SyntheticRkhsEnv: need at least one center");
    detail::check_points(centers_, kernel_, "SyntheticRkhsEnv");
    if (!(norm_bound >= 0.0)) throw InputError("SyntheticRkhsEnv: norm bound must be >= 0");
    gram_ = kernel_matrix(centers_, kernel_);
    lambda_max_ = Eigen::SelfAdjointEigenSolver<Matrix>(gram_, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

SyntheticRkhsEnv SyntheticRkhsEnv::uniform_1d(double lo, double hi, int n_centers, KernelSpec kernel,
                                              double norm_bound, double time_freq, double sigma_sq) {
    if (n_centers < 1) throw InputError("SyntheticRkhsEnv: n_centers must be >= 1");
    if (!(hi > lo)) throw InputError("SyntheticRkhsEnv: empty domain");
    Points c = n_centers == 1 ? Points::Constant(1, 1, 0.5 * (lo + hi))
                              : Points(Vector::LinSpaced(n_centers, lo, hi));
    kernel.dim = 1;
    return SyntheticRkhsEnv(std::move(c), kernel, norm_bound, time_freq, sigma_sq);
}

Vector SyntheticRkhsEnv::coefficients(long t) const {
    check_time(t);
    const Eigen::Index n = centers_.rows();
    Vector u(n);
    for (Eigen::Index i = 0; i < n; ++i)
        u(i) = std::sin(time_freq_ * static_cast<double>(t) + static_cast<double>(i + 1));
    const double norm = u.norm();
    if (norm == 0.0) return Vector::Zero(n);
    return (norm_bound_ / lambda_max_) * u / norm;
}

double SyntheticRkhsEnv::rkhs_norm_sq(long t) const {
    const Vector a = coefficients(t);
    return a.dot(gram_ * a);
}

double SyntheticRkhsEnv::true_value(const Vector& x, long t) const {
    const Vector a = coefficients(t);
    double f = 0.0;
    for (Eigen::Index i = 0; i < centers_.rows(); ++i) f += a(i) * se_kernel(x, centers_.row(i).transpose(), kernel_);
    return f;
}

Vector SyntheticRkhsEnv::true_values(const Points& X, long t) const {
    return cross_kernel(X, centers_, kernel_) * coefficients(t);
}

std::size_t nearest_index(const Points& grid, const Vector& x) {
    if (grid.rows() == 0) throw InputError("nearest_index: empty grid");
    if (x.size() != grid.cols()) throw InputError("nearest_index: dimension mismatch");
    std::size_t best = 0;
    double best_d = (grid.row(0).transpose() - x).squaredNorm();
    for (Eigen::Index i = 1; i < grid.rows(); ++i) {
        const double d = (grid.row(i).transpose() - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::size_t>(i);
        }
    }
    return best;
}

BrownianDriftEnv::BrownianDriftEnv(Points grid, Vector initial, double sigma_sq, long horizon, Rng& drift_rng)
    : Environment(sigma_sq), grid_(std::move(grid)) {
    if (grid_.rows() < 1) throw InputError("BrownianDriftEnv: empty grid");
    if (initial.size() != grid_.rows()) throw InputError("BrownianDriftEnv: initial values do not match the grid");
    if (horizon < 0) throw InputError("BrownianDriftEnv: horizon must be >= 0");
    path_.resize(horizon + 1, grid_.rows());
    path_.row(0) = initial.transpose();
    std::uniform_real_distribution<double> step(-sigma_sq, sigma_sq);
    for (long t = 1; t <= horizon; ++t)
        for (Eigen::Index i = 0; i < grid_.rows(); ++i) path_(t, i) = path_(t - 1, i) + (sigma_sq > 0.0 ? step(drift_rng) : 0.0);
}

double BrownianDriftEnv::true_value(const Vector& x, long t) const {
    check_time(t);
    return path_(t, static_cast<Eigen::Index>(nearest_index(grid_, x)));
}

Vector BrownianDriftEnv::true_values(const Points& X, long t) const {
    check_time(t);
    Vector out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out(i) = path_(t, static_cast<Eigen::Index>(nearest_index(grid_, X.row(i).transpose())));
    return out;
}

double drift_increment_check(const BrownianDriftEnv& env, long t1, long t2, std::size_t paths, Rng& rng) {
    if (t1 > t2) throw InputError("drift_increment_check: t1 must not exceed t2");
    if (paths < 2) throw InputError("drift_increment_check: need at least two paths");
    if (t1 == t2) return 0.0;
    const double s = env.sigma_sq();
    std::uniform_real_distribution<double> step(-s, s);
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
        double diff = 0.0;
        for (long t = t1; t < t2; ++t) diff += step(rng);
        // Welford update.
        const double delta = diff - mean;
        mean += delta / static_cast<double>(p + 1);
        m2 += delta * (diff - mean);
    }
    return m2 / static_cast<double>(paths - 1);
}

GridSeriesEnv::GridSeriesEnv(Points grid, Matrix values, double sigma_sq)
    : Environment(sigma_sq), grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.rows() < 1 || values_.rows() < 1) throw InputError("GridSeriesEnv: empty grid or series");
    if (values_.cols() != grid_.rows()) throw InputError("GridSeriesEnv: value columns do not match the grid");
}

double GridSeriesEnv::true_value(const Vector& x, long t) const {
    if (t < 1 || t > max_time()) throw InputError("GridSeriesEnv: step " + std::to_string(t) + " outside the series");
    return values_(t - 1, static_cast<Eigen::Index>(nearest_index(grid_, x)));
}

Vector GridSeriesEnv::true_values(const Points& X, long t) const {
    if (t < 1 || t > max_time()) throw InputError("GridSeriesEnv: step " + std::to_string(t) + " outside the series");
    Vector out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out(i) = values_(t - 1, static_cast<Eigen::Index>(nearest_index(grid_, X.row(i).transpose())));
    return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
        throw ConfigError("grid series: bad number '" + s + "' at " + where);
    return v;
}

}  // namespace

GridSeriesEnv load_grid_series_csv(const std::string& path, double sigma_sq) {
    std::ifstream in(path);
    if (!in) throw ConfigError("grid series: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("grid series: empty file " + path);
    const auto header = split_csv(line);
    const int d = static_cast<int>(header.size()) - 2;
    if (d < 1 || header.front() != "t" || header.back() != "value")
        throw ConfigError("grid series: header must be t,x1,...,xd,value");
    for (int k = 1; k <= d; ++k)
        if (header[static_cast<std::size_t>(k)] != "x" + std::to_string(k))
            throw ConfigError("grid series: header column " + std::to_string(k + 1) + " must be x" + std::to_string(k));

    std::vector<std::vector<double>> grid;
    std::map<std::vector<double>, std::size_t> grid_index;
    std::vector<std::vector<double>> rows;  // per timestep, values by grid index
    std::vector<std::vector<bool>> seen;
    long current_t = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv(line);
        const std::string where = path + ":" + std::to_string(line_no);
        if (cells.size() != header.size()) throw ConfigError("grid series: wrong column count at " + where);
        const double tv = parse_number(cells[0], where);
        if (tv != std::floor(tv)) throw ConfigError("grid series: non-integer t at " + where);
        const long t = static_cast<long>(tv);
        std::vector<double> x(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = parse_number(cells[static_cast<std::size_t>(k + 1)], where);
        const double value = parse_number(cells.back(), where);

        if (rows.empty() || t != current_t) {
            if (!rows.empty()) {
                if (t != current_t + 1)
                    throw ConfigError("grid series: timestep " + std::to_string(t) + " does not follow " +
                                      std::to_string(current_t) + " at " + where);
                for (std::size_t g = 0; g < grid.size(); ++g)
                    if (!seen.back()[g])
                        throw ConfigError("grid series: timestep " + std::to_string(current_t) + " is missing grid points");
            }
            current_t = t;
            rows.emplace_back(grid.size(), 0.0);
            seen.emplace_back(grid.size(), false);
        }

        auto it = grid_index.find(x);
        if (it == grid_index.end()) {
            if (rows.size() > 1) throw ConfigError("grid series: point not on the first timestep's grid at " + where);
            it = grid_index.emplace(x, grid.size()).first;
            grid.push_back(x);
            rows.back().push_back(0.0);
            seen.back().push_back(false);
        }
        if (seen.back()[it->second]) throw ConfigError("grid series: duplicate grid point at " + where);
        seen.back()[it->second] = true;
        rows.back()[it->second] = value;
    }
    if (rows.empty()) throw ConfigError("grid series: no data rows in " + path);
    for (std::size_t g = 0; g < grid.size(); ++g)
        if (!seen.back()[g])
            throw ConfigError("grid series: timestep " + std::to_string(current_t) + " is missing grid points");

    Points G(static_cast<Eigen::Index>(grid.size()), d);
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (int k = 0; k < d; ++k) G(static_cast<Eigen::Index>(g), k) = grid[g][static_cast<std::size_t>(k)];
    Matrix V(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t g = 0; g < grid.size(); ++g) V(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(g)) = rows[r][g];
    return GridSeriesEnv(std::move(G), std::move(V), sigma_sq);
}

Optimum env_optimum(const Environment& env, long t, const Points& candidates) {
    if (candidates.rows() == 0) throw InputError("env_optimum: empty candidate set");
    const Vector f = env.true_values(candidates, t);
    Optimum best;
    best.value = f(0);
    for (Eigen::Index i = 1; i < f.size(); ++i)
        if (f(i) > best.value) {
            best.value = f(i);
            best.index = static_cast<std::size_t>(i);
        }
    best.point = candidates.row(static_cast<Eigen::Index>(best.index)).transpose();
    return best;
}

}  // namespace sparq
