#include <doctest.h>

#include <random>

#include "sparq/kernel.hpp"

using namespace sparq;

namespace {

Points random_points(int n, int d, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    Points X(n, d);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k) X(i, k) = u(rng);
    return X;
}

}  // namespace

TEST_CASE("se kernel closed form") {
    const KernelSpec spec{0.5, 3.0, 1};
    const Vector zero = Vector::Zero(1);
    CHECK(se_kernel(zero, zero, spec) == doctest::Approx(0.5).epsilon(1e-15));
    // 0.5 * exp(-1/2), evaluated at 30 digits.
    CHECK(se_kernel(zero, Vector::Constant(1, 3.0), spec) == doctest::Approx(0.30326532985631671).epsilon(1e-15));
}

TEST_CASE("se kernel decays monotonically with distance") {
    const KernelSpec spec{0.5, 3.0, 1};
    double prev = se_kernel(Vector::Zero(1), Vector::Zero(1), spec);
    for (double r = 0.5; r < 60.0; r += 0.5) {
        const double v = se_kernel(Vector::Zero(1), Vector::Constant(1, r), spec);
        CHECK(v < prev);
        CHECK(v >= 0.0);
        prev = v;
    }
    CHECK(prev < 1e-40);
}

TEST_CASE("kernel spec validation") {
    CHECK_THROWS_AS((KernelSpec{0.0, 1.0, 1}.validate()), InputError);
    CHECK_THROWS_AS((KernelSpec{1.0, -1.0, 1}.validate()), InputError);
    CHECK_THROWS_AS((KernelSpec{1.0, 1.0, 0}.validate()), InputError);
    CHECK_THROWS_AS(se_kernel(Vector::Zero(2), Vector::Zero(1), KernelSpec{1.0, 1.0, 1}), InputError);
    CHECK_THROWS_AS(kernel_matrix(Points::Zero(3, 2), KernelSpec{1.0, 1.0, 1}), InputError);
}

TEST_CASE("kernel matrix matches pairwise evaluation") {
    const KernelSpec spec{0.7, 1.3, 2};
    const Points X = random_points(4, 2, 11);
    const Matrix K = kernel_matrix(X, spec);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Vector xi = X.row(i).transpose(), xj = X.row(j).transpose();
            CHECK(K(i, j) == doctest::Approx(se_kernel(xi, xj, spec)).epsilon(1e-14));
        }
    CHECK(K.isApprox(K.transpose(), 0.0));
    CHECK(K.diagonal().isApproxToConstant(0.7, 1e-15));
}

TEST_CASE("kernel matrix edge cases") {
    const KernelSpec spec{0.5, 3.0, 1};
    const Matrix one = kernel_matrix(Points::Constant(1, 1, 2.0), spec);
    REQUIRE(one.rows() == 1);
    CHECK(one(0, 0) == 0.5);

    Points dup(3, 1);
    dup << 1.0, 1.0, 4.0;
    CHECK(std::abs(kernel_matrix(dup, spec).determinant()) < 1e-14);
}

TEST_CASE("kernel matrix is PSD") {
    const KernelSpec spec{1.0, 0.8, 3};
    const Matrix K = kernel_matrix(random_points(30, 3, 5), spec);
    Eigen::SelfAdjointEigenSolver<Matrix> es(K);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("parallel kernels agree with the serial reference") {
    const KernelSpec spec{0.5, 3.0, 2};
    const Points A = random_points(157, 2, 1), B = random_points(93, 2, 2);
    CHECK(kernel_matrix(A, spec) == serial::kernel_matrix(A, spec));
    CHECK(cross_kernel(A, B, spec) == serial::cross_kernel(A, B, spec));
    const Matrix C = cross_kernel(A, B, spec);
    CHECK(C.rows() == 157);
    CHECK(C.cols() == 93);
}
