#include "sparq/divergence.hpp"

#include <algorithm>
#include <sstream>

namespace sparq {

namespace {

Eigen::LLT<Matrix> factor(const Matrix& cov, const char* which) {
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "finite_kl: marginal covariance of " << which << " is singular after jitter";
        throw NumericalError(msg.str());
    }
    return llt;
}

}  // namespace

double finite_kl(const Posterior& p, const Posterior& q, const Points& grid) {
    if (grid.rows() == 0) throw InputError("finite_kl: grid must be non-empty");
    if (!(p.kernel() == q.kernel())) throw InputError("finite_kl: posteriors must share one kernel");

    const auto k = static_cast<double>(grid.rows());
    Matrix cov_p = p.covariance(grid);
    Matrix cov_q = q.covariance(grid);
    cov_p.diagonal().array() += kKlJitter;
    cov_q.diagonal().array() += kKlJitter;
    const Vector mean_p = p.evaluate(grid).mean;
    const Vector mean_q = q.evaluate(grid).mean;

    const auto llt_p = factor(cov_p, "P");
    const auto llt_q = factor(cov_q, "Q");
    const Matrix lq = llt_q.matrixL();
    const double logdet_p = 2.0 * Matrix(llt_p.matrixL()).diagonal().array().log().sum();
    const double logdet_q = 2.0 * lq.diagonal().array().log().sum();

    // tr(Sq^-1 Sp) = |Lq^-1 Lp|_F^2
    const Matrix w = lq.triangularView<Eigen::Lower>().solve(Matrix(llt_p.matrixL()));
    const Vector diff = lq.triangularView<Eigen::Lower>().solve(mean_q - mean_p);
    const double kl = 0.5 * (w.squaredNorm() + diff.squaredNorm() - k + logdet_q - logdet_p);
    return std::max(0.0, kl);
}

}  // namespace sparq
