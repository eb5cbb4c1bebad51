#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "sparq/trace.hpp"

using namespace sparq;

namespace {

RunTrace random_trace(int dim, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 10.0);
    RunTrace tr;
    tr.policy = "sparq";
    tr.dim = dim;
    for (int i = 1; i <= n; ++i) {
        StepRecord s;
        s.t = i;
        s.x = Vector::NullaryExpr(dim, [&](Eigen::Index) { return g(rng); });
        s.y = g(rng);
        s.f_x = g(rng) / 3.0;
        s.f_opt = s.f_x + std::abs(g(rng));
        s.regret = s.f_opt - s.f_x;
        s.queries = static_cast<std::size_t>(rng() % 40);
        s.beta = std::abs(g(rng)) * 1e-7;
        tr.steps.push_back(s);
    }
    return tr;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
    Rng rng(1);
    std::uniform_int_distribution<std::uint64_t> bits;
    int checked = 0;
    while (checked < 5000) {
        const std::uint64_t b = bits(rng);
        double v;
        std::memcpy(&v, &b, sizeof v);
        if (!std::isfinite(v)) continue;
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
        ++checked;
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(3.0) == "3");
    CHECK(std::strtod(format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) > 0.0);
}

TEST_CASE("trace csv round-trips") {
    for (const int dim : {1, 3}) {
        RunTrace tr = random_trace(dim, 50, 7 + dim);
        tr.steps[0].y = std::numeric_limits<double>::denorm_min();
        tr.steps[1].y = -1.7e308;
        tr.steps[2].y = -0.0;
        std::stringstream ss;
        write_trace_csv(tr, ss);
        const RunTrace back = read_trace_csv(ss);
        CHECK(back.dim == dim);
        CHECK(back.steps == tr.steps);
        CHECK(back.total_queries() == tr.total_queries());

        std::stringstream again;
        write_trace_csv(back, again);
        std::stringstream first;
        write_trace_csv(tr, first);
        CHECK(again.str() == first.str());
    }
}

TEST_CASE("trace csv header and files") {
    RunTrace tr = random_trace(2, 3, 1);
    std::stringstream ss;
    write_trace_csv(tr, ss);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "t,x1,x2,y,f_x,f_opt,regret,queries,beta");

    const auto path = (std::filesystem::temp_directory_path() / "sparq_trace_roundtrip.csv").string();
    write_trace_csv(tr, path);
    CHECK(read_trace_csv(path).steps == tr.steps);
    CHECK_THROWS_AS(read_trace_csv("/nonexistent/trace.csv"), InputError);

    tr.steps[1].x = Vector::Zero(3);
    std::stringstream bad;
    CHECK_THROWS_AS(write_trace_csv(tr, bad), InputError);
}

TEST_CASE("malformed trace csv is rejected") {
    const char* bad[] = {
        "",
        "t,y,f_x,f_opt,regret,queries,beta\n",
        "time,x1,y,f_x,f_opt,regret,queries,beta\n",
        "t,x2,y,f_x,f_opt,regret,queries,beta\n",
        "t,x1,y,f_x,f_opt,regret,beta,queries\n",
        "t,x1,y,f_x,f_opt,regret,queries,beta\n1,0,0,0,0,0,0\n",
        "t,x1,y,f_x,f_opt,regret,queries,beta\n1,0,0,0,0,0,-3,0\n",
        "t,x1,y,f_x,f_opt,regret,queries,beta\n1,0,zero,0,0,0,0,0\n",
        "t,x1,y,f_x,f_opt,regret,queries,beta\n1.5,0,0,0,0,0,0,0\n",
        "t,x1,y,f_x,f_opt,regret,queries,beta\n1,0,0,0,0,0,0,0 \n",
    };
    for (const char* text : bad) {
        std::stringstream ss(text);
        CHECK_THROWS_AS(read_trace_csv(ss), InputError);
    }
    std::stringstream crlf("t,x1,y,f_x,f_opt,regret,queries,beta\r\n1,0.5,1,2,3,1,4,0.25\r\n\r\n");
    const auto tr = read_trace_csv(crlf);
    REQUIRE(tr.steps.size() == 1);
    CHECK(tr.steps[0].queries == 4);
    CHECK(tr.steps[0].beta == 0.25);
}
