#include "sparq/trace.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sparq {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

template <class T>
T parse_cell(const std::string& s, std::size_t line) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InputError("trace: cannot parse '" + s + "' on line " + std::to_string(line));
    return v;
}

}  // namespace

std::size_t RunTrace::total_queries() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.queries;
    return n;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
    out << "t";
    for (int k = 1; k <= trace.dim; ++k) out << ",x" << k;
    out << ",y,f_x,f_opt,regret,queries,beta\n";
    for (const auto& s : trace.steps) {
        if (s.x.size() != trace.dim) throw InputError("trace: step point has the wrong dimension");
        out << s.t;
        for (Eigen::Index k = 0; k < s.x.size(); ++k) out << ',' << format_double(s.x(k));
        out << ',' << format_double(s.y) << ',' << format_double(s.f_x) << ',' << format_double(s.f_opt) << ','
            << format_double(s.regret) << ',' << s.queries << ',' << format_double(s.beta) << '\n';
    }
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("trace: cannot write " + path);
    write_trace_csv(trace, out);
    if (!out) throw InputError("trace: write failed for " + path);
}

RunTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("trace: empty file");
    const auto header = split(line);
    const int dim = static_cast<int>(header.size()) - 7;
    if (dim < 1 || header[0] != "t") throw InputError("trace: unexpected header");
    for (int k = 1; k <= dim; ++k)
        if (header[static_cast<std::size_t>(k)] != "x" + std::to_string(k)) throw InputError("trace: unexpected header");
    const char* tail[] = {"y", "f_x", "f_opt", "regret", "queries", "beta"};
    for (std::size_t k = 0; k < 6; ++k)
        if (header[static_cast<std::size_t>(dim) + 1 + k] != tail[k]) throw InputError("trace: unexpected header");

    RunTrace trace;
    trace.dim = dim;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw InputError("trace: wrong column count on line " + std::to_string(line_no));
        StepRecord s;
        s.t = parse_cell<long>(cells[0], line_no);
        s.x.resize(dim);
        for (int k = 0; k < dim; ++k) s.x(k) = parse_cell<double>(cells[static_cast<std::size_t>(k) + 1], line_no);
        const std::size_t o = static_cast<std::size_t>(dim) + 1;
        s.y = parse_cell<double>(cells[o], line_no);
        s.f_x = parse_cell<double>(cells[o + 1], line_no);
        s.f_opt = parse_cell<double>(cells[o + 2], line_no);
        s.regret = parse_cell<double>(cells[o + 3], line_no);
        s.queries = parse_cell<std::size_t>(cells[o + 4], line_no);
        s.beta = parse_cell<double>(cells[o + 5], line_no);
        trace.steps.push_back(std::move(s));
    }
    return trace;
}

RunTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("trace: cannot open " + path);
    return read_trace_csv(in);
}

}  // namespace sparq
