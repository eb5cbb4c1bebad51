#pragma once

#include "sparq/types.hpp"

namespace sparq {

/// Squared-exponential kernel k(x, x') = amplitude_sq * exp(-|x - x'|^2 / (2 l^2)).
struct KernelSpec {
    double amplitude_sq = 1.0;
    double lengthscale = 1.0;
    int dim = 1;

    /// Throws InputError unless amplitude_sq > 0, lengthscale > 0, dim >= 1.
    void validate() const;

    bool operator==(const KernelSpec&) const = default;
};

double se_kernel(const Vector& x1, const Vector& x2, const KernelSpec& spec);

/// Gram matrix over the rows of X. Rows are filled in parallel.
Matrix kernel_matrix(const Points& X, const KernelSpec& spec);

/// Cross-covariance K(A, B) with A.rows() x B.rows() entries.
Matrix cross_kernel(const Points& A, const Points& B, const KernelSpec& spec);

namespace serial {

Matrix kernel_matrix(const Points& X, const KernelSpec& spec);
Matrix cross_kernel(const Points& A, const Points& B, const KernelSpec& spec);

}  // namespace serial

namespace detail {

void check_points(const Points& X, const KernelSpec& spec, const char* what);

inline double se_from_sqdist(double sqdist, const KernelSpec& spec) {
    return spec.amplitude_sq * std::exp(-sqdist / (2.0 * spec.lengthscale * spec.lengthscale));
}

}  // namespace detail
}  // namespace sparq
