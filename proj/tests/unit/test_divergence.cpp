#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sparq/divergence.hpp"

using namespace sparq;

namespace {

Dataset line_data(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> g;
    Dataset data(1);
    for (int i = 0; i < n; ++i) data.append(Vector::Constant(1, -4.5 + i), std::sin(0.7 * i) + 0.1 * g(rng), 0.1, 0);
    return data;
}

// Two-Gaussian KL with explicit inverses and determinants.
double kl_oracle(const Posterior& p, const Posterior& q, const Points& grid) {
    Matrix sp = p.covariance(grid), sq = q.covariance(grid);
    sp.diagonal().array() += kKlJitter;
    sq.diagonal().array() += kKlJitter;
    const Vector d = q.evaluate(grid).mean - p.evaluate(grid).mean;
    const Matrix inv = sq.inverse();
    const double k = static_cast<double>(grid.rows());
    return 0.5 * ((inv * sp).trace() + d.dot(inv * d) - k + std::log(sq.determinant() / sp.determinant()));
}

}  // namespace

TEST_CASE("kl of identical posteriors is zero") {
    const KernelSpec spec{0.5, 3.0, 1};
    const Points grid = Vector::LinSpaced(20, -5.0, 5.0);
    const auto p = fit_posterior(line_data(10, 1), spec);
    CHECK(finite_kl(p, p, grid) < 1e-10);
    const auto prior = fit_posterior(Dataset(1), spec);
    CHECK(finite_kl(prior, prior, grid) == 0.0);
}

TEST_CASE("kl matches the closed-form Gaussian formula") {
    const KernelSpec spec{0.5, 3.0, 1};
    // Coarse grid keeps the explicit inverse well conditioned.
    const Points grid = Vector::LinSpaced(6, -6.0, 6.0);
    const Dataset full = line_data(10, 2);
    const auto q = fit_posterior(full, spec);
    const auto p = fit_posterior(full.subset({1, 4, 8}), spec);
    const double got = finite_kl(p, q, grid);
    CHECK(got > 0.0);
    CHECK(got == doctest::Approx(kl_oracle(p, q, grid)).epsilon(1e-6));
}

TEST_CASE("kl preconditions") {
    const auto p = fit_posterior(Dataset(1), KernelSpec{0.5, 3.0, 1});
    const auto q = fit_posterior(Dataset(1), KernelSpec{0.5, 2.0, 1});
    CHECK_THROWS_AS(finite_kl(p, q, Points::Zero(3, 1)), InputError);
    CHECK_THROWS_AS(finite_kl(p, p, Points(0, 1)), InputError);
}

TEST_CASE("kl shrinks along doubling nested sparse sets") {
    // Single-point refinements can raise the KL for a fixed draw of y; the
    // decrease holds along doubling chains, checked here on many datasets.
    const KernelSpec spec{0.5, 3.0, 1};
    const Points grid = Vector::LinSpaced(25, -24.0, 24.0);
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        Rng rng(seed);
        std::normal_distribution<double> g;
        std::uniform_real_distribution<double> u(-20.0, 20.0);
        Dataset full(1);
        for (int i = 0; i < 40; ++i) {
            const double x = u(rng);
            full.append(Vector::Constant(1, x), std::sin(0.3 * x) + 0.3 * g(rng), 0.1, 0);
        }
        const auto q = fit_posterior(full, spec);
        std::vector<std::size_t> order(40);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        double prev = 1e300;
        for (const std::size_t m : {5u, 10u, 20u, 40u}) {
            const double kl = finite_kl(fit_posterior(full.subset({order.begin(), order.begin() + static_cast<long>(m)}), spec), q, grid);
            CHECK(kl <= prev + 1e-8);
            prev = kl;
        }
        CHECK(prev < 1e-8);
    }
}
