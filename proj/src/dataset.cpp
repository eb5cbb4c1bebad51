#include "sparq/dataset.hpp"

#include <cmath>
#include <string>

namespace sparq {

Dataset::Dataset(int dim) : inputs(0, dim), outputs(0), noise_vars(0) {}

void Dataset::append(const Vector& x, double y, double noise_var, long timestamp) {
    if (inputs.cols() == 0 && inputs.rows() == 0) inputs.resize(0, x.size());
    if (x.size() != inputs.cols())
        throw InputError("Dataset::append: point has dimension " + std::to_string(x.size()) + ", dataset has " +
                         std::to_string(inputs.cols()));
    const Eigen::Index n = inputs.rows();
    inputs.conservativeResize(n + 1, Eigen::NoChange);
    inputs.row(n) = x.transpose();
    outputs.conservativeResize(n + 1);
    outputs(n) = y;
    noise_vars.conservativeResize(n + 1);
    noise_vars(n) = noise_var;
    timestamps.push_back(timestamp);
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    Dataset out(dim());
    const auto m = static_cast<Eigen::Index>(rows.size());
    out.inputs.resize(m, inputs.cols());
    out.outputs.resize(m);
    out.noise_vars.resize(m);
    out.timestamps.reserve(rows.size());
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto r = rows[static_cast<std::size_t>(k)];
        if (r >= size()) throw InputError("Dataset::subset: row index out of range");
        const auto ri = static_cast<Eigen::Index>(r);
        out.inputs.row(k) = inputs.row(ri);
        out.outputs(k) = outputs(ri);
        out.noise_vars(k) = noise_vars(ri);
        out.timestamps.push_back(timestamps[r]);
    }
    return out;
}

void Dataset::validate(double noise_floor) const {
    const auto n = static_cast<Eigen::Index>(timestamps.size());
    if (inputs.rows() != n || outputs.size() != n || noise_vars.size() != n)
        throw InputError("Dataset: inputs, outputs, noise_vars and timestamps must share one length");
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v = noise_vars(i);
        if (!(v > 0.0) || !std::isfinite(v) || v < noise_floor)
            throw InputError("Dataset: noise variance " + std::to_string(v) + " at row " + std::to_string(i) +
                             " is not a positive value >= " + std::to_string(noise_floor));
        if (timestamps[static_cast<std::size_t>(i)] < 0) throw InputError("Dataset: negative timestamp");
    }
}

}  // namespace sparq
