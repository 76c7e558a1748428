#include <doctest.h>

#include <cmath>

#include "qtraj/grid.hpp"

using namespace qtraj;

TEST_CASE("build_grid spacing and points") {
    const auto g = build_grid(-10.0, 10.0, 256);
    CHECK(g.dx == 0.078125);  // 20/256 exactly

    const auto h = build_grid(0.0, 1.0, 16);
    CHECK(h.x(7) == 0.4375);
}

TEST_CASE("build_grid rejects bad input") {
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1.0, 1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(2.0, 1.0, 64), std::invalid_argument);
}

TEST_CASE("wavenumbers follow FFT ordering") {
    const auto g = build_grid(0.0, 2.0 * M_PI, 16);
    const auto k = g.wavenumbers();
    CHECK(k[0] == 0.0);
    CHECK(k[1] == doctest::Approx(1.0));
    CHECK(k[7] == doctest::Approx(7.0));
    CHECK(k[8] == doctest::Approx(-8.0));
    CHECK(k[15] == doctest::Approx(-1.0));
    CHECK(g.nyquist_wavenumber() == doctest::Approx(8.0));
}

TEST_CASE("cell_index wraps periodically") {
    const auto g = build_grid(-1.0, 1.0, 32);
    CHECK(g.cell_index(-1.0) == 0);
    CHECK(g.cell_index(1.0) == 0);   // x_max identified with x_min
    CHECK(g.cell_index(-1.0 - g.dx) == 31);
    CHECK(g.cell_index(0.0) == 16);
}

TEST_CASE("constants must be positive") {
    CHECK_THROWS_AS(validate(PhysicalConstants{-1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PhysicalConstants{1.0, 0.0}), std::invalid_argument);
    CHECK_NOTHROW(validate(PhysicalConstants{}));
}
