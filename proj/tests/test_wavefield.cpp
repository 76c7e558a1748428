#include <doctest.h>

#include <cmath>
#include <complex>

#include "qtraj/propagator.hpp"
#include "qtraj/random.hpp"
#include "qtraj/states.hpp"
#include "qtraj/wavefield.hpp"

using namespace qtraj;
using cplx = std::complex<double>;

namespace {

WaveField random_field(const SpatialGrid& grid, std::uint64_t seed) {
    RandomStream rng(seed);
    WaveField psi;
    psi.grid = grid;
    psi.amp.assign(grid.n_points, {0.0, 0.0});
    for (int m = -6; m <= 6; ++m) {
        const cplx c(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
        for (int k = 0; k < grid.n_points; ++k) {
            const double theta = 2.0 * M_PI * (grid.x(k) - grid.x_min) / grid.length();
            psi.amp[k] += c * std::exp(cplx(0.0, m * theta));
        }
    }
    return psi;
}

// Closed-form current of the spreading free Gaussian: J = rho * v with
// v = v0 + (x - mu) sigma'(t)/sigma(t).
double free_gaussian_current(double x, double x_c, double k0, double sigma0,
                             const PhysicalConstants& c, double t) {
    const double st = free_gaussian_width(sigma0, c, t);
    const double v0 = c.hbar * k0 / c.mass;
    const double mu = x_c + v0 * t;
    const double dlog =
        c.hbar * c.hbar * t / (4.0 * c.mass * c.mass * sigma0 * sigma0 * st * st);
    const double rho =
        std::exp(-(x - mu) * (x - mu) / (2.0 * st * st)) / std::sqrt(2.0 * M_PI * st * st);
    return rho * (v0 + (x - mu) * dlog);
}

}  // namespace

TEST_CASE("normalize halves amplitudes when norm^2 = 4") {
    const auto grid = build_grid(0.0, 1.0, 16);
    WaveField psi;
    psi.grid = grid;
    psi.amp.assign(16, cplx(2.0, 0.0));  // sum |2|^2 dx = 4
    CHECK(discrete_norm(psi) == doctest::Approx(2.0));
    const auto out = normalize(psi);
    for (const auto& a : out.amp) CHECK(a.real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normalize keeps an already normalized field") {
    const auto grid = build_grid(-8.0, 8.0, 128);
    const auto psi = make_gaussian(grid, 0.0, 1.0, 1.0);
    const auto out = normalize(psi);
    CHECK(l2_distance(psi, out) < 1e-12);
}

TEST_CASE("uniform field on [0,1) already has norm 1") {
    const auto grid = build_grid(0.0, 1.0, 16);
    WaveField psi;
    psi.grid = grid;
    psi.amp.assign(16, cplx(1.0, 0.0));
    CHECK(discrete_norm(psi) == doctest::Approx(1.0).epsilon(1e-15));
    const auto out = normalize(psi);
    for (const auto& a : out.amp) CHECK(a.real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normalize rejects the zero field") {
    const auto grid = build_grid(0.0, 1.0, 16);
    WaveField psi;
    psi.grid = grid;
    psi.amp.assign(16, cplx(0.0, 0.0));
    CHECK_THROWS_AS(normalize(psi), std::domain_error);
}

TEST_CASE("plane-wave density is constant 1/L") {
    const auto grid = build_grid(-5.0, 5.0, 64);
    const auto psi = make_plane_wave(grid, 3);
    const auto rho = density(psi);
    for (double v : rho.values) CHECK(v == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("real Gaussian density has std sigma0") {
    // psi ~ exp(-x^2/4 sigma0^2) squares to a Gaussian with variance sigma0^2
    const auto grid = build_grid(-16.0, 16.0, 512);
    const double sigma0 = 1.3;
    const auto psi = make_gaussian(grid, 0.0, 0.0, sigma0);
    const auto rho = density(psi);
    for (int k = 0; k < grid.n_points; ++k) {
        const double x = grid.x(k);
        const double expected = std::exp(-x * x / (2.0 * sigma0 * sigma0)) /
                                std::sqrt(2.0 * M_PI * sigma0 * sigma0);
        CHECK(rho.values[k] == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("density vanishes exactly at a node") {
    const auto grid = build_grid(0.0, 1.0, 16);
    WaveField psi;
    psi.grid = grid;
    psi.amp.assign(16, cplx(1.0, 0.0));
    psi.amp[5] = 0.0;
    CHECK(density(psi).values[5] == 0.0);
}

TEST_CASE("plane-wave current is hbar k0 / (m L)") {
    const auto grid = build_grid(-5.0, 5.0, 128);
    const PhysicalConstants c{1.5, 2.0};
    const auto psi = make_plane_wave(grid, 4);
    const double k0 = plane_wave_wavenumber(grid, 4);
    const auto j = probability_current(psi, c);
    const double expected = (c.hbar * k0 / c.mass) * (1.0 / grid.length());
    for (double v : j) CHECK(v == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("current of a real field is zero") {
    const auto grid = build_grid(-10.0, 10.0, 256);
    const auto psi = make_gaussian(grid, 0.5, 0.0, 1.0);
    for (double v : probability_current(psi, {}))
        CHECK(std::abs(v) < 1e-11);  // spectral roundoff only
}

TEST_CASE("free Gaussian current matches the closed form") {
    const auto grid = build_grid(-20.0, 20.0, 1024);
    const PhysicalConstants c{};
    const double t = 1.5;
    const auto psi = analytic_free_gaussian(grid, 0.0, 0.7, 1.0, c, t);
    const auto j = probability_current(psi, c);
    double worst = 0.0;
    for (int k = 0; k < grid.n_points; ++k) {
        const double expected = free_gaussian_current(grid.x(k), 0.0, 0.7, 1.0, c, t);
        worst = std::max(worst, std::abs(j[k] - expected));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("plane-wave action is linear with slope hbar k0") {
    const auto grid = build_grid(-5.0, 5.0, 128);
    const PhysicalConstants c{0.8, 1.0};
    const auto psi = make_plane_wave(grid, 2);
    const double k0 = plane_wave_wavenumber(grid, 2);
    const auto s = phase_action(psi, c);
    for (int k = 0; k + 1 < grid.n_points; ++k) {
        CHECK(s.node_flag[k] == 0);
        const double slope = (s.values[k + 1] - s.values[k]) / grid.dx;
        CHECK(slope == doctest::Approx(c.hbar * k0).epsilon(1e-10));
    }
}

TEST_CASE("real positive field has zero action") {
    const auto grid = build_grid(-8.0, 8.0, 128);
    const auto psi = make_gaussian(grid, 0.0, 0.0, 1.0);
    const auto s = phase_action(psi, {});
    for (int k = 0; k < grid.n_points; ++k)
        if (!s.node_flag[k]) CHECK(std::abs(s.values[k]) < 1e-12);
}

TEST_CASE("quadratic chirp phase is recovered up to a constant") {
    const auto grid = build_grid(-12.0, 12.0, 1024);
    const PhysicalConstants c{0.7, 1.0};
    const double chirp = 0.4;
    WaveField psi;
    psi.grid = grid;
    psi.amp.resize(grid.n_points);
    for (int k = 0; k < grid.n_points; ++k) {
        const double x = grid.x(k);
        const double s_true = chirp * x * x;
        psi.amp[k] = std::exp(-x * x / 8.0) * std::exp(cplx(0.0, s_true / c.hbar));
    }
    const auto s = phase_action(psi, c);
    const int mid = grid.n_points / 2;
    const double offset = s.values[mid] - chirp * grid.x(mid) * grid.x(mid);
    for (int k = 0; k < grid.n_points; ++k) {
        const double x = grid.x(k);
        if (std::abs(x) > 8.0 || s.node_flag[k]) continue;
        CHECK(std::abs(s.values[k] - offset - chirp * x * x) < 1e-8);
    }
}

TEST_CASE("expectation of a displaced Gaussian is its center") {
    const auto grid = build_grid(-14.0, 18.0, 512);
    const auto psi = make_gaussian(grid, 2.0, 0.0, 1.0);
    CHECK(expectation_position(psi) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("symmetric superposition has zero mean position") {
    const auto grid = build_grid(-20.0, 20.0, 512);
    const auto psi = make_two_gaussian(grid, 0.0, 6.0, 0.0, 1.0);
    CHECK(std::abs(expectation_position(psi)) < 1e-8);
}

TEST_CASE("free Gaussian mean position drifts ballistically") {
    const auto grid = build_grid(-20.0, 20.0, 1024);
    const PhysicalConstants c{1.0, 2.0};
    const double k0 = 1.2, t = 2.0, x_c = -1.0;
    const auto psi = normalize(analytic_free_gaussian(grid, x_c, k0, 1.0, c, t));
    CHECK(expectation_position(psi) ==
          doctest::Approx(x_c + c.hbar * k0 * t / c.mass).epsilon(1e-8));
}

TEST_CASE("property: density of a normalized field integrates to 1") {
    const auto grid = build_grid(-7.0, 9.0, 128);
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto psi = normalize(random_field(grid, seed));
        const auto rho = density(psi);
        double mass = 0.0;
        for (double v : rho.values) mass += v;
        mass *= grid.dx;
        CHECK(std::abs(mass - 1.0) < 1e-9);
    }
}

TEST_CASE("property: action of sqrt(rho) e^{iS/hbar} recovers S") {
    const auto grid = build_grid(-6.0, 6.0, 256);
    const PhysicalConstants c{1.3, 1.0};
    RandomStream rng(99);
    for (int rep = 0; rep < 10; ++rep) {
        // smooth periodic S from a few Fourier modes
        const double a1 = rng.uniform() - 0.5, a2 = rng.uniform() - 0.5;
        const double b1 = rng.uniform() - 0.5;
        WaveField psi;
        psi.grid = grid;
        psi.amp.resize(grid.n_points);
        std::vector<double> s_true(grid.n_points);
        for (int k = 0; k < grid.n_points; ++k) {
            const double th = 2.0 * M_PI * (grid.x(k) - grid.x_min) / grid.length();
            s_true[k] = a1 * std::sin(th) + a2 * std::cos(2 * th) + b1 * std::sin(3 * th);
            psi.amp[k] = std::exp(cplx(0.0, s_true[k] / c.hbar)) *
                         (0.5 + 0.3 * std::cos(th));
        }
        const auto s = phase_action(psi, c);
        // compare up to one global constant taken at the first reliable point
        int ref = -1;
        for (int k = 0; k < grid.n_points; ++k)
            if (!s.node_flag[k]) { ref = k; break; }
        REQUIRE(ref >= 0);
        const double off = s.values[ref] - s_true[ref];
        for (int k = ref; k < grid.n_points; ++k) {
            if (s.node_flag[k]) break;  // unwrap restarts beyond a node
            CHECK(std::abs(s.values[k] - off - s_true[k]) < 1e-9);
        }
    }
}
