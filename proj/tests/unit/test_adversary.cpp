#include <doctest.h>

#include <cmath>

#include "sparq/adversary.hpp"

using namespace sparq;

// Reference values below come from adaptive high-precision quadrature of the
// bump transform, independent of the trapezoid rule under test.

TEST_CASE("bump spectrum") {
    CHECK(bump_spectrum(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(bump_spectrum(1.0) == 0.0);
    CHECK(bump_spectrum(-1.5) == 0.0);
    CHECK(bump_spectrum(0.5) == bump_spectrum(-0.5));
}

TEST_CASE("bump profile against high-precision quadrature") {
    CHECK(bump_profile(0.0) == doctest::Approx(0.443993816168079437823).epsilon(1e-12));
    CHECK(bump_profile(0.3) == doctest::Approx(0.331034443337397082587).epsilon(1e-12));
    CHECK(bump_profile(1.0) == doctest::Approx(-0.0428575388855629280892).epsilon(1e-10));
    CHECK(bump_profile(2.5) == doctest::Approx(-0.00249326264869153847111).epsilon(1e-9));
    CHECK(bump_profile(-0.3) == bump_profile(0.3));
    CHECK_THROWS_AS(bump_profile(0.0, 2), InputError);
}

TEST_CASE("half-height radius") {
    const double zeta = bump_half_radius();
    CHECK(zeta == doctest::Approx(0.446479313782217038342).epsilon(1e-10));
    CHECK(bump_profile(zeta) == doctest::Approx(0.5 * bump_profile(0.0)).epsilon(1e-10));
}

TEST_CASE("member count") {
    const double h0 = bump_profile(0.0), zeta = bump_half_radius();
    CHECK(adversary_count(0.05, 5.0, 0.1, h0, zeta) == 11);
    CHECK(adversary_count(0.01, 5.0, 0.05, h0, zeta) == 27);
    CHECK(adversary_count(0.1, 10.0, 0.1, h0, zeta) == 11);
    CHECK(adversary_count(0.2, 1.0, 0.1, h0, zeta) == 0);
    CHECK(adversary_count(0.05, 5.0, 1.0, h0, zeta) == 1);
}

TEST_CASE("family construction") {
    const auto f = build_adversary(1, 0.05, 5.0, 0.1);
    CHECK(f.count == 11);
    CHECK(f.log_term == doctest::Approx(2.40825508133718741).epsilon(1e-12));
    CHECK(build_adversary(1, 0.01, 5.0, 0.05).log_term == doctest::Approx(3.67111940349131517).epsilon(1e-12));
    CHECK(f.peaks.size() == 11);
    CHECK(f.cell_width == doctest::Approx(2.0 / 11.0));
    for (std::size_t m = 0; m < f.peaks.size(); ++m) {
        CHECK(f.cell_of(f.peaks[m]) == m);
        CHECK(f.member(m, f.peaks[m]) == doctest::Approx(2.0 * f.gamma).epsilon(1e-12));
    }
    CHECK(f.cell_of(-5.0) == 0);
    CHECK(f.cell_of(5.0) == 10);
    // The interpolated profile tracks direct quadrature.
    for (const double u : {0.0, 0.123, 0.77, 3.3})
        CHECK(std::abs(f.profile(u) - bump_profile(u)) < 1e-6);
    CHECK(f.profile(100.0) == bump_profile(100.0));
    CHECK_THROWS_AS(f.member(11, 0.0), InputError);
}

TEST_CASE("family separation and norm") {
    struct Triple { double gamma, B, l; };
    for (const Triple c : {Triple{0.05, 5.0, 0.1}, Triple{0.01, 5.0, 0.05}, Triple{0.1, 10.0, 0.1},
                           Triple{0.02, 3.0, 0.08}}) {
        const auto f = build_adversary(1, c.gamma, c.B, c.l);
        const auto chk = check_adversary(f);
        CHECK(chk.max_peak_rel_error < 0.01);
        CHECK(chk.max_cross_cell <= f.gamma);
        CHECK(chk.separated);
        CHECK(chk.norm_within_bound);
    }
}

TEST_CASE("adversary errors") {
    CHECK_THROWS_AS(build_adversary(2, 0.05, 5.0, 0.1), InputError);
    CHECK_THROWS_AS(build_adversary(1, 0.0, 5.0, 0.1), InputError);
    CHECK_THROWS_AS(build_adversary(1, 0.05, -1.0, 0.1), InputError);
    CHECK_THROWS_AS(build_adversary(1, 0.05, 5.0, 0.1, 1.0, 1.0), InputError);
    CHECK_THROWS_AS(build_adversary(1, 0.2, 1.0, 0.1), ConfigError);
    CHECK_THROWS_AS(build_adversary(1, 0.05, 5.0, 1.0), ConfigError);
    CHECK_THROWS_AS(check_adversary(build_adversary(1, 0.05, 5.0, 0.1), 1), InputError);
}
