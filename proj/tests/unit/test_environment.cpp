#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sparq/environment.hpp"

using namespace sparq;
namespace fs = std::filesystem;

namespace {

const KernelSpec kSpec{0.5, 3.0, 1};

std::string fixture(const char* name) { return std::string(SPARQ_FIXTURE_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / ("sparq_env_" + name);
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST_CASE("synthetic objective matches direct summation") {
    const auto env = SyntheticRkhsEnv::uniform_1d(-50.0, 50.0, 20, kSpec, 5.0, 0.3, 0.1);
    CHECK(env.centers().rows() == 20);
    CHECK(env.centers()(0, 0) == -50.0);
    CHECK(env.centers()(19, 0) == 50.0);
    for (const long t : {0L, 1L, 17L, 250L}) {
        // u_i = sin(0.3 t + i), i = 1..n; a = (B / lambda_max) u / |u|
        Vector u(20);
        for (int i = 0; i < 20; ++i) u(i) = std::sin(0.3 * static_cast<double>(t) + (i + 1));
        const Vector a = (5.0 / env.lambda_max()) * u / u.norm();
        CHECK((env.coefficients(t) - a).cwiseAbs().maxCoeff() < 1e-14);
        for (const double x : {-49.3, -2.0, 0.0, 13.7}) {
            double f = 0.0;
            for (int i = 0; i < 20; ++i) {
                const double c = -50.0 + 100.0 * i / 19.0;
                f += a(i) * 0.5 * std::exp(-(x - c) * (x - c) / 18.0);
            }
            CHECK(env.true_value(Vector::Constant(1, x), t) == doctest::Approx(f).epsilon(1e-12));
        }
    }
}

TEST_CASE("synthetic norm respects the construction bound") {
    const auto env = SyntheticRkhsEnv::uniform_1d(-50.0, 50.0, 20, kSpec, 5.0, 0.3, 0.1);
    Eigen::SelfAdjointEigenSolver<Matrix> es(kernel_matrix(env.centers(), kSpec));
    CHECK(env.lambda_max() == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-12));
    for (long t = 0; t <= 500; ++t) CHECK(env.rkhs_norm_sq(t) <= 25.0 / env.lambda_max() + 1e-8);
    const Points grid(Vector::LinSpaced(50, -50.0, 50.0));
    const Vector batch = env.true_values(grid, 9);
    for (Eigen::Index i = 0; i < 50; ++i)
        CHECK(batch(i) == doctest::Approx(env.true_value(grid.row(i).transpose(), 9)).epsilon(1e-12));
}

TEST_CASE("observations and expert answers") {
    auto env = SyntheticRkhsEnv::uniform_1d(-10.0, 10.0, 5, kSpec, 5.0, 0.3, 0.0);
    Rng rng(1);
    const Vector x = Vector::Constant(1, 1.5);
    CHECK(env.observe(x, 4, rng) == env.true_value(x, 4));
    CHECK(env.expert_query(Points(0, 1), 4, rng).size() == 0);
    CHECK(env.query_count() == 0);
    CHECK(env.expert_query(Points::Constant(1, 1, 1.5), 4, rng)(0) == env.true_value(x, 4));
    CHECK(env.query_count() == 1);
    CHECK_THROWS_AS(env.observe(x, -1, rng), InputError);
}

TEST_CASE("noisy observations are unbiased and reproducible") {
    auto env = SyntheticRkhsEnv::uniform_1d(-10.0, 10.0, 5, kSpec, 5.0, 0.3, 0.1);
    const Vector x = Vector::Constant(1, -2.0);
    Rng a(42), b(42);
    CHECK(env.observe(x, 3, a) == env.observe(x, 3, b));

    constexpr int kDraws = 100000;
    Rng rng(3), rq(4);
    double obs = 0.0, exp = 0.0;
    const Points X = Points::Constant(1, 1, -2.0);
    for (int i = 0; i < kDraws; ++i) {
        obs += env.observe(x, 3, rng);
        exp += env.expert_query(X, 3, rq)(0);
    }
    const double tol = 4.0 * std::sqrt(0.1) / std::sqrt(double(kDraws));
    CHECK(std::abs(obs / kDraws - env.true_value(x, 3)) < tol);
    CHECK(std::abs(exp / kDraws - env.true_value(x, 3)) < tol);
    CHECK(env.query_count() == kDraws);
}

TEST_CASE("optimum and nearest grid point") {
    Points grid(4, 1);
    grid << 0.0, 1.0, 2.0, 3.0;
    CHECK(nearest_index(grid, Vector::Constant(1, 1.4)) == 1);
    CHECK(nearest_index(grid, Vector::Constant(1, 1.5)) == 1);
    CHECK(nearest_index(grid, Vector::Constant(1, 9.0)) == 3);

    GridSeriesEnv flat(grid, Matrix::Constant(2, 4, 1.0), 0.1);
    CHECK(env_optimum(flat, 1, grid).index == 0);

    const SyntheticRkhsEnv one(Points::Constant(1, 1, 2.2), kSpec, 1.0, 0.0, 0.1);
    // A single center with u = sin(1) > 0 peaks at the grid point nearest it.
    const Points fine(Vector::LinSpaced(101, -5.0, 5.0));
    const auto opt = env_optimum(one, 0, fine);
    CHECK(fine(static_cast<Eigen::Index>(opt.index), 0) == doctest::Approx(2.2));
}

TEST_CASE("brownian drift") {
    const Points grid(Vector::LinSpaced(10, 0.0, 1.0));
    const Vector init = Vector::LinSpaced(10, -1.0, 1.0);
    Rng rng(5), again(5);
    const BrownianDriftEnv env(grid, init, 0.2, 50, rng);
    const BrownianDriftEnv twin(grid, init, 0.2, 50, again);
    CHECK(env.path() == twin.path());
    CHECK(env.max_time() == 50);
    CHECK(env.true_values(grid, 0) == init);
    const Matrix steps = env.path().bottomRows(50) - env.path().topRows(50);
    CHECK(steps.cwiseAbs().maxCoeff() <= 0.2);
    CHECK(env.true_value(Vector::Constant(1, 0.34), 7) == env.path()(7, 3));
    Rng bad(1);
    CHECK_THROWS_AS(BrownianDriftEnv(grid, Vector::Zero(3), 0.2, 5, bad), InputError);
}

TEST_CASE("drift increment variance") {
    const double s = 0.3;
    const Points grid(Vector::LinSpaced(3, 0.0, 1.0));
    Rng rng(8);
    const BrownianDriftEnv env(grid, Vector::Zero(3), s, 20, rng);
    Rng mc(9);
    // One Uniform(-s, s) step has variance (2s)^2 / 12 = s^2 / 3.
    const double one = drift_increment_check(env, 3, 4, 100000, mc);
    CHECK(one == doctest::Approx(s * s / 3.0).epsilon(0.02));
    const double nine = drift_increment_check(env, 1, 10, 100000, mc);
    CHECK(nine == doctest::Approx(9.0 * s * s / 3.0).epsilon(0.05));
    CHECK(drift_increment_check(env, 4, 4, 10, mc) == 0.0);
    CHECK_THROWS_AS(drift_increment_check(env, 5, 4, 10, mc), InputError);
}

TEST_CASE("grid series fixture") {
    const auto env = load_grid_series_csv(fixture("grid_small.csv"), 0.05);
    CHECK(env.dim() == 1);
    CHECK(env.grid().rows() == 4);
    CHECK(env.max_time() == 6);
    CHECK(env.true_value(Vector::Constant(1, 2.0), 1) == 0.863209);
    CHECK(env.true_value(Vector::Constant(1, 2.2), 1) == 0.863209);
    const auto opt = env_optimum(env, 3, env.grid());
    Eigen::Index best;
    env.values().row(2).maxCoeff(&best);
    CHECK(opt.index == static_cast<std::size_t>(best));
    CHECK_THROWS_AS(env.true_value(Vector::Constant(1, 0.0), 7), InputError);

    const auto two = load_grid_series_csv(fixture("grid_2d.csv"), 0.05);
    CHECK(two.dim() == 2);
    CHECK(two.true_value(Vector::Ones(2), 2) == 23.0);
}

TEST_CASE("grid series loader rejects malformed files") {
    CHECK_THROWS_AS(load_grid_series_csv("/nonexistent/grid.csv", 0.1), ConfigError);
    const char* bad[] = {
        "time,x1,value\n1,0,1\n",                    // header
        "t,x1,value\n1,0,1\n1,1,2\n2,0,1\n",         // missing point at t=2
        "t,x1,value\n1,0,1\n1,1,2\n3,0,1\n3,1,1\n",  // gap in time
        "t,x1,value\n1,0,1\n1,0,2\n",                // duplicate point
        "t,x1,value\n1,0,1\n1,1,2\n2,0,1\n2,5,1\n",  // off-grid point
        "t,x1,value\n1,0,abc\n",                     // bad number
        "t,x1,value\n",                              // no rows
    };
    int k = 0;
    for (const char* text : bad) CHECK_THROWS_AS(load_grid_series_csv(write_temp(std::to_string(k++) + ".csv", text), 0.1), ConfigError);
}
