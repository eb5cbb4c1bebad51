#pragma once

#include <cstddef>
#include <vector>

#include "sparq/types.hpp"

namespace sparq {

/// Time-stamped observations with a per-observation noise variance (the
/// diagonal of Sigma). All four columns always share one length.
struct Dataset {
    Points inputs;
    Vector outputs;
    Vector noise_vars;
    std::vector<long> timestamps;

    Dataset() = default;
    explicit Dataset(int dim);

    std::size_t size() const { return timestamps.size(); }
    bool empty() const { return timestamps.empty(); }
    int dim() const { return static_cast<int>(inputs.cols()); }

    void append(const Vector& x, double y, double noise_var, long timestamp);

    /// Keeps only the rows listed in `rows`, in that order.
    Dataset subset(const std::vector<std::size_t>& rows) const;

    /// Throws InputError when lengths disagree or a noise variance is not
    /// strictly above `noise_floor` (and positive).
    void validate(double noise_floor = 0.0) const;
};

}  // namespace sparq
