#include <doctest.h>

#include <cmath>
#include <complex>

#include "qtraj/fft.hpp"
#include "qtraj/propagator.hpp"
#include "qtraj/states.hpp"
#include "qtraj/velocity.hpp"

using namespace qtraj;
using cplx = std::complex<double>;

namespace {

// closed-form current velocity of a free Gaussian: v0 + (x - mu) sigma'/sigma
double free_gaussian_velocity(double x, double x_c, double k0, double sigma0,
                              const PhysicalConstants& c, double t) {
    const double st = free_gaussian_width(sigma0, c, t);
    const double v0 = c.hbar * k0 / c.mass;
    const double mu = x_c + v0 * t;
    const double dlog =
        c.hbar * c.hbar * t / (4.0 * c.mass * c.mass * sigma0 * sigma0 * st * st);
    return v0 + (x - mu) * dlog;
}

}  // namespace

TEST_CASE("plane-wave current velocity is hbar k0 / m") {
    const auto grid = build_grid(-5.0, 5.0, 128);
    const PhysicalConstants c{2.0, 0.5};
    const auto psi = make_plane_wave(grid, 3);
    const double k0 = plane_wave_wavenumber(grid, 3);
    const auto v = bohm_velocity(psi, c);
    for (int k = 0; k < grid.n_points; ++k) {
        CHECK(v.reliable[k] == 1);
        CHECK(v.values[k] == doctest::Approx(c.hbar * k0 / c.mass).epsilon(1e-10));
    }
}

TEST_CASE("real field has zero current velocity") {
    const auto grid = build_grid(-12.0, 12.0, 256);
    const auto psi = make_harmonic_ground_state(grid, 1.0, {});
    const auto v = bohm_velocity(psi, {});
    for (int k = 0; k < grid.n_points; ++k)
        if (v.reliable[k]) CHECK(std::abs(v.values[k]) < 1e-9);
}

TEST_CASE("free Gaussian velocity matches the closed form at reliable points") {
    const auto grid = build_grid(-20.0, 20.0, 1024);
    const PhysicalConstants c{};
    const double t = 1.0;
    const auto psi = analytic_free_gaussian(grid, 0.0, 0.0, 1.0, c, t);
    const auto v = bohm_velocity(psi, c);
    // spec oracle at sigma0 = hbar = m = 1: v(x,t) = x t / (4 + t^2)
    for (int k = 0; k < grid.n_points; ++k) {
        if (!v.reliable[k]) continue;
        const double x = grid.x(k);
        if (std::abs(x) > 8.0) continue;  // quotient loses digits deep in tails
        CHECK(std::abs(v.values[k] - x * t / (4.0 + t * t)) < 1e-6);
        CHECK(std::abs(v.values[k] - free_gaussian_velocity(x, 0.0, 0.0, 1.0, c, t)) < 1e-6);
    }
}

TEST_CASE("osmotic velocity of a plane wave vanishes") {
    const auto grid = build_grid(-5.0, 5.0, 128);
    const auto psi = make_plane_wave(grid, 2);
    const auto u = osmotic_velocity(psi, {});
    for (int k = 0; k < grid.n_points; ++k) CHECK(std::abs(u.values[k]) < 1e-10);
}

TEST_CASE("osmotic velocity of a Gaussian is the log-density gradient") {
    const auto grid = build_grid(-18.0, 22.0, 1024);
    const PhysicalConstants c{1.4, 0.9};
    const double sigma0 = 1.1, center = 2.0;
    const auto psi = make_gaussian(grid, center, 0.0, sigma0);
    const auto u = osmotic_velocity(psi, c);
    // rho ~ exp(-(x-c)^2 / 2 sigma^2): u = -(hbar/2m)(x-c)/sigma^2
    for (int k = 0; k < grid.n_points; ++k) {
        const double x = grid.x(k);
        if (!u.reliable[k] || std::abs(x - center) > 6.0) continue;
        const double expected =
            -(c.hbar / (2.0 * c.mass)) * (x - center) / (sigma0 * sigma0);
        CHECK(std::abs(u.values[k] - expected) < 1e-6);
    }
}

TEST_CASE("osmotic velocity agrees with the spectral density-gradient route") {
    const auto grid = build_grid(-16.0, 16.0, 512);
    const PhysicalConstants c{};
    const auto psi = make_two_gaussian(grid, 0.0, 4.0, 0.6, 1.0);
    const auto u = osmotic_velocity(psi, c);
    const auto rho = density(psi);
    const auto drho = spectral_derivative(grid, rho.values);
    double rho_max = 0.0;
    for (double r : rho.values) rho_max = std::max(rho_max, r);
    for (int k = 0; k < grid.n_points; ++k) {
        if (rho.values[k] < 1e-6 * rho_max) continue;
        const double expected =
            (c.hbar / (2.0 * c.mass)) * drho[k] / rho.values[k];
        CHECK(std::abs(u.values[k] - expected) < 1e-7);
    }
}

TEST_CASE("symmetric state has antisymmetric osmotic velocity") {
    const auto grid = build_grid(-16.0, 16.0, 512);
    const auto psi = make_two_gaussian(grid, 0.0, 5.0, 0.0, 1.0);
    const auto u = osmotic_velocity(psi, {});
    // grid point -x_k is index n-k
    for (int k = 1; k < grid.n_points; ++k) {
        const int mk = grid.n_points - k;
        if (!u.reliable[k] || !u.reliable[mk]) continue;
        CHECK(u.values[k] == doctest::Approx(-u.values[mk]).epsilon(1e-8));
    }
}

TEST_CASE("node handling: flags exactly where density is floored, cap respected") {
    const auto grid = build_grid(-5.0, 5.0, 256);
    WaveField psi;
    psi.grid = grid;
    psi.amp.resize(grid.n_points);
    for (int k = 0; k < grid.n_points; ++k) {
        const double th = 2.0 * M_PI * (grid.x(k) - grid.x_min) / grid.length();
        psi.amp[k] = std::cos(th) * std::exp(cplx(0.0, 0.3 * std::sin(th)));
    }
    psi = normalize(psi);
    const double cap = 7.5;
    const auto v = bohm_velocity(psi, {}, cap);
    const auto rho = density(psi);
    double rho_max = 0.0;
    for (double r : rho.values) rho_max = std::max(rho_max, r);
    for (int k = 0; k < grid.n_points; ++k) {
        CHECK(v.reliable[k] == (rho.values[k] >= kNodeEps * rho_max ? 1 : 0));
        CHECK(std::abs(v.values[k]) <= cap);
    }
}

TEST_CASE("gauge: a global phase leaves the velocity unchanged") {
    const auto grid = build_grid(-16.0, 16.0, 512);
    const PhysicalConstants c{};
    const auto psi = make_two_gaussian(grid, 0.0, 4.0, 0.8, 1.0);
    WaveField rotated = psi;
    const cplx phase = std::exp(cplx(0.0, 1.234));
    for (auto& a : rotated.amp) a *= phase;
    const auto v1 = bohm_velocity(psi, c);
    const auto v2 = bohm_velocity(rotated, c);
    for (int k = 0; k < grid.n_points; ++k)
        if (v1.reliable[k]) CHECK(std::abs(v1.values[k] - v2.values[k]) < 1e-12);
}

TEST_CASE("Galilean boost shifts the velocity by hbar k0 / m") {
    const auto grid = build_grid(-16.0, 16.0, 512);
    const PhysicalConstants c{1.0, 2.0};
    const auto psi = make_gaussian(grid, 1.0, 0.0, 1.2);
    const double k0 = plane_wave_wavenumber(grid, 5);  // exact grid mode
    WaveField boosted = psi;
    for (int k = 0; k < grid.n_points; ++k)
        boosted.amp[k] *= std::exp(cplx(0.0, k0 * grid.x(k)));
    const auto v1 = bohm_velocity(psi, c);
    const auto v2 = bohm_velocity(boosted, c);
    const double shift = c.hbar * k0 / c.mass;
    for (int k = 0; k < grid.n_points; ++k)
        if (v1.reliable[k])
            CHECK(v2.values[k] - v1.values[k] == doctest::Approx(shift).epsilon(1e-9));
}

TEST_CASE("amplitude scaling leaves both velocities unchanged") {
    const auto grid = build_grid(-16.0, 16.0, 256);
    const auto psi = make_two_gaussian(grid, 0.0, 4.0, 0.5, 1.0);
    WaveField scaled = psi;
    for (auto& a : scaled.amp) a *= -3.7;
    const auto v1 = bohm_velocity(psi, {});
    const auto v2 = bohm_velocity(scaled, {});
    const auto u1 = osmotic_velocity(psi, {});
    const auto u2 = osmotic_velocity(scaled, {});
    for (int k = 0; k < grid.n_points; ++k) {
        if (!v1.reliable[k]) continue;
        CHECK(std::abs(v1.values[k] - v2.values[k]) < 1e-10);
        CHECK(std::abs(u1.values[k] - u2.values[k]) < 1e-10);
    }
}

TEST_CASE("interpolator: snapshot grid points reproduce field values") {
    const auto grid = build_grid(-16.0, 16.0, 256);
    const PhysicalConstants c{};
    const auto psi0 = make_gaussian(grid, 0.0, 1.0, 1.0);
    const auto hist = propagate(psi0, Free{}, c, 1.0, 1e-3, 100);
    VelocityInterpolator field(hist);

    const auto v_snap = bohm_velocity(hist.snapshots[3], c);
    const auto u_snap = osmotic_velocity(hist.snapshots[3], c);
    const double t = hist.snapshots[3].time;
    for (int k = 0; k < grid.n_points; k += 17) {
        const double x = grid.x(k);
        CHECK(field.eval(VelocityKind::Current, x, t).value == v_snap.values[k]);
        CHECK(field.eval(VelocityKind::Osmotic, x, t).value == u_snap.values[k]);
        // forward = current + osmotic, exact at a grid point
        CHECK(field.eval(VelocityKind::Forward, x, t).value ==
              v_snap.values[k] + u_snap.values[k]);
        CHECK(field.eval(VelocityKind::Backward, x, t).value ==
              v_snap.values[k] - u_snap.values[k]);
    }
}

TEST_CASE("interpolator: plane-wave history gives hbar k0 / m anywhere") {
    const auto grid = build_grid(-10.0, 10.0, 256);
    const PhysicalConstants c{};
    const auto psi0 = make_plane_wave(grid, 4);
    const double k0 = plane_wave_wavenumber(grid, 4);
    const auto hist = propagate(psi0, Free{}, c, 0.5, 1e-3, 50);
    VelocityInterpolator field(hist);
    for (double x : {-9.7, -3.21, 0.0, 4.4, 9.99})
        for (double t : {0.0, 0.123, 0.25, 0.4999, 0.5})
            CHECK(field.eval(VelocityKind::Current, x, t).value ==
                  doctest::Approx(k0).epsilon(1e-9));
}

TEST_CASE("mean of forward and backward drifts is the current velocity") {
    const auto grid = build_grid(-16.0, 16.0, 256);
    const PhysicalConstants c{};
    const auto psi0 = make_two_gaussian(grid, 0.0, 4.0, 0.7, 1.0);
    const auto hist = propagate(psi0, Free{}, c, 0.2, 1e-3, 20);
    VelocityInterpolator field(hist);
    for (double x : {-4.4, -1.0, 0.3, 2.2, 5.1}) {
        for (double t : {0.0, 0.05, 0.13, 0.2}) {
            const double f = field.eval(VelocityKind::Forward, x, t).value;
            const double b = field.eval(VelocityKind::Backward, x, t).value;
            const double v = field.eval(VelocityKind::Current, x, t).value;
            CHECK(0.5 * (f + b) == doctest::Approx(v).epsilon(1e-12));
        }
    }
}

TEST_CASE("interpolator rejects out-of-range queries") {
    const auto grid = build_grid(-10.0, 10.0, 128);
    const auto psi0 = make_gaussian(grid, 0.0, 0.0, 1.0);
    const auto hist = propagate(psi0, Free{}, {}, 0.5, 1e-3, 50);
    VelocityInterpolator field(hist);
    CHECK_THROWS_AS(field.eval(VelocityKind::Current, 0.0, 0.75), std::out_of_range);
    CHECK_THROWS_AS(field.eval(VelocityKind::Current, 0.0, -0.1), std::out_of_range);
    CHECK_THROWS_AS(field.eval(VelocityKind::Current, 10.0, 0.2), std::out_of_range);
    CHECK_THROWS_AS(field.eval(VelocityKind::Current, -10.5, 0.2), std::out_of_range);
}
