#include "sparq/nystrom.hpp"

#include <algorithm>

namespace sparq {

double nystrom_residual_trace(const Matrix& gram, std::span<const std::size_t> subset) {
    const Eigen::Index n = gram.rows();
    if (gram.cols() != n) throw InputError("nystrom_residual_trace: Gram matrix must be square");
    for (const auto s : subset)
        if (s >= static_cast<std::size_t>(n)) throw InputError("nystrom_residual_trace: subset index out of range");

    const double total = gram.trace();
    if (subset.empty()) return std::max(0.0, total);

    const auto m = static_cast<Eigen::Index>(subset.size());
    Matrix kss(m, m);
    Matrix kxs(n, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        const auto sa = static_cast<Eigen::Index>(subset[static_cast<std::size_t>(a)]);
        kxs.col(a) = gram.col(sa);
        for (Eigen::Index b = 0; b < m; ++b) kss(a, b) = gram(sa, static_cast<Eigen::Index>(subset[static_cast<std::size_t>(b)]));
    }

    // K_SS is symmetric, so its eigendecomposition gives the pseudo-inverse.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(kss);
    const Vector& lambda = eig.eigenvalues();
    const double cutoff = kPinvCutoff * std::max(0.0, lambda.maxCoeff());
    const Matrix proj = kxs * eig.eigenvectors();
    double captured = 0.0;
    for (Eigen::Index k = 0; k < m; ++k)
        if (lambda(k) > cutoff) captured += proj.col(k).squaredNorm() / lambda(k);
    return std::max(0.0, total - captured);
}

double nystrom_residual_trace(const Points& X, std::span<const std::size_t> subset, const KernelSpec& spec) {
    return nystrom_residual_trace(kernel_matrix(X, spec), subset);
}

}  // namespace sparq
