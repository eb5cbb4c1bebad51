#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparq/types.hpp"

namespace sparq {

struct StepRecord {
    long t = 0;
    Vector x;
    double y = 0.0;
    double f_x = 0.0;    ///< f_t(x_t)
    double f_opt = 0.0;  ///< f_t(x*_t) on the candidate grid
    double regret = 0.0;
    std::size_t queries = 0;
    double beta = 0.0;

    bool operator==(const StepRecord&) const = default;
};

/// One run of one policy. Timing lives in the run summary, not here, so
/// that repeated runs produce byte-identical trace files.
struct RunTrace {
    std::string policy;
    std::uint64_t seed = 0;
    int dim = 1;
    std::vector<StepRecord> steps;

    std::size_t total_queries() const;
};

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

/// Columns: t,x1..xd,y,f_x,f_opt,regret,queries,beta
void write_trace_csv(const RunTrace& trace, std::ostream& out);
void write_trace_csv(const RunTrace& trace, const std::string& path);

/// Throws InputError on malformed content.
RunTrace read_trace_csv(std::istream& in);
RunTrace read_trace_csv(const std::string& path);

}  // namespace sparq
