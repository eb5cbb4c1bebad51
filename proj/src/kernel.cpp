#include "sparq/kernel.hpp"

#include <cmath>
#include <string>

namespace sparq {

Rng make_stream(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                      0x5eed5u};
    return Rng(seq);
}

double standard_normal(Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

double uniform01(Rng& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

void KernelSpec::validate() const {
    if (!(amplitude_sq > 0.0) || !std::isfinite(amplitude_sq))
        throw InputError("kernel amplitude_sq must be a positive finite number");
    if (!(lengthscale > 0.0) || !std::isfinite(lengthscale))
        throw InputError("kernel lengthscale must be a positive finite number");
    if (dim < 1) throw InputError("kernel dim must be >= 1");
}

namespace detail {

void check_points(const Points& X, const KernelSpec& spec, const char* what) {
    if (X.rows() > 0 && X.cols() != spec.dim)
        throw InputError(std::string(what) + ": points have dimension " + std::to_string(X.cols()) +
                         ", kernel expects " + std::to_string(spec.dim));
}

}  // namespace detail

double se_kernel(const Vector& x1, const Vector& x2, const KernelSpec& spec) {
    if (x1.size() != spec.dim || x2.size() != spec.dim)
        throw InputError("se_kernel: dimension mismatch (got " + std::to_string(x1.size()) + " and " +
                         std::to_string(x2.size()) + ", expected " + std::to_string(spec.dim) + ")");
    return detail::se_from_sqdist((x1 - x2).squaredNorm(), spec);
}

Matrix kernel_matrix(const Points& X, const KernelSpec& spec) {
    detail::check_points(X, spec, "kernel_matrix");
    const Eigen::Index n = X.rows();
    Matrix K(n, n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = spec.amplitude_sq;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = detail::se_from_sqdist((X.row(i) - X.row(j)).squaredNorm(), spec);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

Matrix cross_kernel(const Points& A, const Points& B, const KernelSpec& spec) {
    detail::check_points(A, spec, "cross_kernel");
    detail::check_points(B, spec, "cross_kernel");
    Matrix K(A.rows(), B.rows());
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < B.rows(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            K(i, j) = detail::se_from_sqdist((A.row(i) - B.row(j)).squaredNorm(), spec);
    return K;
}

namespace serial {

Matrix kernel_matrix(const Points& X, const KernelSpec& spec) {
    detail::check_points(X, spec, "kernel_matrix");
    const Eigen::Index n = X.rows();
    Matrix K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            K(i, j) = detail::se_from_sqdist((X.row(i) - X.row(j)).squaredNorm(), spec);
    return K;
}

Matrix cross_kernel(const Points& A, const Points& B, const KernelSpec& spec) {
    detail::check_points(A, spec, "cross_kernel");
    detail::check_points(B, spec, "cross_kernel");
    Matrix K(A.rows(), B.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < B.rows(); ++j)
            K(i, j) = detail::se_from_sqdist((A.row(i) - B.row(j)).squaredNorm(), spec);
    return K;
}

}  // namespace serial
}  // namespace sparq
