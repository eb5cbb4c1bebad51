#include <doctest.h>

#include <numeric>
#include <random>

#include "sparq/nystrom.hpp"

using namespace sparq;

namespace {

Points random_points(int n, std::uint64_t seed, double spread = 4.0) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-spread, spread);
    return Points::NullaryExpr(n, 1, [&](Eigen::Index, Eigen::Index) { return u(rng); });
}

// Residual of each feature vector after projection onto span{phi(s)}:
// k(x,x) - k_xS K_SS^{-1} k_Sx, summed over x, with a plain LU solve.
double projection_oracle(const Points& X, const std::vector<std::size_t>& S, const KernelSpec& spec) {
    const auto m = static_cast<Eigen::Index>(S.size());
    Matrix kss(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            kss(a, b) = se_kernel(X.row(static_cast<Eigen::Index>(S[a])).transpose(),
                                  X.row(static_cast<Eigen::Index>(S[b])).transpose(), spec);
    const Matrix inv = kss.fullPivLu().inverse();
    double total = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Vector xi = X.row(i).transpose();
        Vector k(m);
        for (Eigen::Index a = 0; a < m; ++a) k(a) = se_kernel(xi, X.row(static_cast<Eigen::Index>(S[a])).transpose(), spec);
        total += se_kernel(xi, xi, spec) - k.dot(inv * k);
    }
    return total;
}

}  // namespace

TEST_CASE("residual trace limits") {
    const KernelSpec spec{0.5, 3.0, 1};
    const Points X = random_points(6, 1);
    std::vector<std::size_t> all(6);
    std::iota(all.begin(), all.end(), std::size_t{0});
    CHECK(nystrom_residual_trace(X, all, spec) < 1e-8);
    CHECK(nystrom_residual_trace(X, std::vector<std::size_t>{}, spec) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("residual trace matches the projection oracle") {
    const KernelSpec spec{0.5, 1.5, 1};
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const Points X = random_points(6, seed);
        const std::vector<std::size_t> S{seed % 3, 3 + seed % 3};
        CHECK(nystrom_residual_trace(X, S, spec) == doctest::Approx(projection_oracle(X, S, spec)).epsilon(1e-9));
    }
}

TEST_CASE("residual trace tolerates duplicated subset points") {
    const KernelSpec spec{0.5, 3.0, 1};
    Points X(4, 1);
    X << 0.0, 0.0, 2.0, 5.0;
    const std::vector<std::size_t> S{0, 1};
    const std::vector<std::size_t> single{0};
    CHECK(nystrom_residual_trace(X, S, spec) == doctest::Approx(nystrom_residual_trace(X, single, spec)).epsilon(1e-9));
    CHECK_THROWS_AS(nystrom_residual_trace(X, std::vector<std::size_t>{7}, spec), InputError);
}

TEST_CASE("adding points to both sets never increases the residual trace") {
    const KernelSpec spec{0.5, 3.0, 1};
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 8);
        const int extra = 1 + static_cast<int>(rng() % 4);
        const Points X = random_points(n, rng(), 10.0);
        const Points A = random_points(extra, rng(), 10.0);
        std::vector<std::size_t> S;
        for (int i = 0; i < n; ++i)
            if (rng() % 2) S.push_back(static_cast<std::size_t>(i));
        Points XA(n + extra, 1);
        XA << X, A;
        std::vector<std::size_t> SA = S;
        for (int i = 0; i < extra; ++i) SA.push_back(static_cast<std::size_t>(n + i));
        CHECK(nystrom_residual_trace(XA, SA, spec) <= nystrom_residual_trace(X, S, spec) + 1e-8);
    }
}
