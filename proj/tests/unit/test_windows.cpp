#include <doctest.h>

#include <cmath>
#include <random>

#include "sparq/types.hpp"
#include "sparq/windows.hpp"

using namespace sparq;

namespace {

// The window rule as an integer statement: t^r < L <= t^r + 1, checked with
// long double powers against the integer length.
bool satisfies_rule(long t, long len, double alpha, double alpha_tilde) {
    const long double p = std::pow(static_cast<long double>(t), static_cast<long double>(alpha_tilde) / alpha);
    return static_cast<long double>(len) > p && static_cast<long double>(len) <= p + 1.0L;
}

}  // namespace

TEST_CASE("window plan examples") {
    const auto plan = plan_windows(1.0, 0.25, 1, 10);
    CHECK(plan.starts == std::vector<long>{1, 3, 5, 7, 9});
    CHECK(window_length(16, 1.0, 0.25) == 3);
    CHECK(window_length(81, 1.0, 0.25) == 4);
    const auto p16 = plan_windows(1.0, 0.25, 16, 30);
    CHECK(p16.starts[1] == 19);

    const auto flat = plan_windows(2.0, 0.0, 1, 20);
    for (std::size_t j = 1; j < flat.starts.size(); ++j) CHECK(flat.starts[j] - flat.starts[j - 1] == 2);
}

TEST_CASE("window plan lookups") {
    const auto plan = plan_windows(1.0, 0.25, 1, 10);
    CHECK(plan.is_start(5));
    CHECK_FALSE(plan.is_start(6));
    CHECK(plan.window_start(6) == 5);
    CHECK(plan.window_end(6) == 7);
    CHECK(plan.window_start(10) == 9);
    CHECK(plan.window_end(10) == 11);
    CHECK_THROWS_AS(plan.window_start(11), InputError);
}

TEST_CASE("window plan errors") {
    CHECK_THROWS_AS(plan_windows(0.0, 0.0, 1, 10), ConfigError);
    CHECK_THROWS_AS(plan_windows(1.0, 1.5, 1, 10), ConfigError);
    CHECK_THROWS_AS(plan_windows(1.0, -0.1, 1, 10), ConfigError);
    CHECK_THROWS_AS(plan_windows(1.0, 0.25, 0, 10), InputError);
    CHECK_THROWS_AS(plan_windows(1.0, 0.25, 5, 4), InputError);
}

TEST_CASE("window lengths snap at exact integer powers") {
    // t^r integral: the length must be t^r + 1, never t^r or t^r + 2.
    CHECK(window_length(1000000, 3.0, 1.0) == 101);
    CHECK(window_length(4096, 2.0, 1.0) == 65);
    CHECK(window_length(729, 3.0, 0.5) == 4);
    CHECK(window_length(625, 1.0, 0.25) == 6);
}

TEST_CASE("every consecutive window pair satisfies the rule") {
    Rng rng(2024);
    std::uniform_real_distribution<double> at(0.0, 1.0 / 3.0), a(1.0 / 3.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double alpha_tilde = at(rng), alpha = a(rng);
        const auto plan = plan_windows(alpha, alpha_tilde, 1, 5000);
        CHECK(plan.starts.front() == 1);
        for (std::size_t j = 0; j + 1 < plan.starts.size(); ++j) {
            const long t = plan.starts[j];
            REQUIRE(satisfies_rule(t, plan.starts[j + 1] - t, alpha, alpha_tilde));
        }
        CHECK(plan.starts.back() <= 5000);
    }
}
