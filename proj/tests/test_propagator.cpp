#include <doctest.h>

#include <cmath>
#include <complex>

#include "qtraj/propagator.hpp"
#include "qtraj/states.hpp"

using namespace qtraj;
using cplx = std::complex<double>;

TEST_CASE("analytic free Gaussian: width, center, initial condition") {
    const auto grid = build_grid(-20.0, 20.0, 512);
    const PhysicalConstants c{};

    // t = 0 reduces to the initial packet
    const auto psi0 = analytic_free_gaussian(grid, 0.5, 0.8, 1.0, c, 0.0);
    const auto ref = make_gaussian(grid, 0.5, 0.8, 1.0);
    CHECK(l2_distance(normalize(psi0), ref) < 1e-9);

    // hbar = m = sigma0 = 1: sigma(2) = sqrt(2)
    CHECK(free_gaussian_width(1.0, c, 2.0) == doctest::Approx(std::sqrt(2.0)));

    // k0 = 1, t = 3: center at x_c + 3
    const auto psi3 = normalize(analytic_free_gaussian(grid, -2.0, 1.0, 1.0, c, 3.0));
    CHECK(expectation_position(psi3) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("analytic coherent state: displacement and return") {
    const auto grid = build_grid(-16.0, 16.0, 512);
    const PhysicalConstants c{};
    const double omega = 1.0, x_c = 1.5;

    const auto psi0 = analytic_coherent_state(grid, x_c, omega, c, 0.0);
    CHECK(expectation_position(normalize(psi0)) == doctest::Approx(x_c).epsilon(1e-8));

    // half period: center at -x_c
    const auto half = normalize(analytic_coherent_state(grid, x_c, omega, c, M_PI / omega));
    CHECK(expectation_position(half) == doctest::Approx(-x_c).epsilon(1e-8));

    // x_c = 0: stationary ground-state density
    const auto g0 = density(normalize(analytic_coherent_state(grid, 0.0, omega, c, 0.0)));
    const auto g1 = density(normalize(analytic_coherent_state(grid, 0.0, omega, c, 0.77)));
    for (int k = 0; k < grid.n_points; ++k)
        CHECK(g0.values[k] == doctest::Approx(g1.values[k]).epsilon(1e-12));
}

TEST_CASE("analytic coherent state solves the Schrodinger equation") {
    // independent oracle check: finite-difference dpsi/dt against H psi
    const auto grid = build_grid(-16.0, 16.0, 1024);
    const PhysicalConstants c{0.8, 1.3};
    const double omega = 1.1, x_c = 0.9, t = 0.6, ht = 1e-5;
    const auto minus = analytic_coherent_state(grid, x_c, omega, c, t - ht);
    const auto plus = analytic_coherent_state(grid, x_c, omega, c, t + ht);
    const auto mid = analytic_coherent_state(grid, x_c, omega, c, t);
    const auto d2 = spectral_derivative(grid, spectral_derivative(grid, mid.amp));
    double worst = 0.0;
    for (int k = grid.n_points / 4; k < 3 * grid.n_points / 4; ++k) {
        const cplx lhs = cplx(0.0, c.hbar) * (plus.amp[k] - minus.amp[k]) / (2.0 * ht);
        const double x = grid.x(k);
        const cplx rhs = -c.hbar * c.hbar / (2.0 * c.mass) * d2[k] +
                         0.5 * c.mass * omega * omega * x * x * mid.amp[k];
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("plane wave is a kinetic eigenstate of one step") {
    const auto grid = build_grid(-10.0, 10.0, 256);
    const PhysicalConstants c{};
    const auto psi = make_plane_wave(grid, 5);
    const double k0 = plane_wave_wavenumber(grid, 5);
    const double dt = 1e-3;
    const auto out = step(psi, Free{}, c, dt);
    const cplx expected_phase = std::exp(cplx(0.0, -0.5 * c.hbar * k0 * k0 * dt / c.mass));
    for (int k = 0; k < grid.n_points; ++k) {
        CHECK(std::abs(out.amp[k] - psi.amp[k] * expected_phase) < 1e-12);
        CHECK(std::norm(out.amp[k]) == doctest::Approx(std::norm(psi.amp[k])).epsilon(1e-12));
    }
}

TEST_CASE("harmonic ground-state density is stationary under stepping") {
    const auto grid = build_grid(-12.0, 12.0, 512);
    const PhysicalConstants c{};
    const double omega = 1.0;
    const auto psi0 = make_harmonic_ground_state(grid, omega, c);
    const auto hist = propagate(psi0, Harmonic{omega}, c, 0.5, 2e-4, 2500);
    const auto rho0 = density(psi0);
    const auto rho1 = density(hist.snapshots.back());
    double worst = 0.0;
    for (int k = 0; k < grid.n_points; ++k)
        worst = std::max(worst, std::abs(rho1.values[k] - rho0.values[k]));
    CHECK(worst < 1e-8);
}

TEST_CASE("step preserves the norm to 1e-12") {
    const auto grid = build_grid(-15.0, 15.0, 256);
    const PhysicalConstants c{};
    auto psi = make_two_gaussian(grid, 0.0, 5.0, 0.7, 1.0);
    const auto out = step(psi, GaussianBarrier{2.0, 1.0, 0.0}, c, 5e-4);
    CHECK(std::abs(discrete_norm(out) - 1.0) < 1e-12);
}

TEST_CASE("step rejects a dt beyond the phase-wrap bound") {
    const auto grid = build_grid(-10.0, 10.0, 1024);
    const PhysicalConstants c{};
    const auto psi = make_gaussian(grid, 0.0, 0.0, 1.0);
    SplitOperator op(grid, Free{}, c);
    CHECK_THROWS_AS(op.step(psi, 2.0 * op.max_step()), std::invalid_argument);
    CHECK_THROWS_AS(op.step(psi, 0.0), std::invalid_argument);
    CHECK_NOTHROW(op.step(psi, 0.5 * op.max_step()));
}

TEST_CASE("propagated free Gaussian matches the closed form") {
    const auto grid = build_grid(-20.0, 20.0, 1024);
    const PhysicalConstants c{};
    const auto psi0 = normalize(analytic_free_gaussian(grid, 0.0, 0.0, 1.0, c, 0.0));
    const auto hist = propagate(psi0, Free{}, c, 2.0, 1e-3, 2000);
    const auto ref = analytic_free_gaussian(grid, 0.0, 0.0, 1.0, c, 2.0);
    CHECK(l2_distance(hist.snapshots.back(), ref) < 1e-6);
}

TEST_CASE("coherent state returns after one period") {
    const auto grid = build_grid(-16.0, 16.0, 512);
    const PhysicalConstants c{};
    const double omega = 1.0;
    const auto psi0 = normalize(analytic_coherent_state(grid, 1.0, omega, c, 0.0));
    const double period = 2.0 * M_PI / omega;
    const double dt = period / 6284.0;
    const auto hist = propagate(psi0, Harmonic{omega}, c, period, dt, 6284);
    CHECK(fidelity(psi0, hist.snapshots.back()) > 1.0 - 1e-6);
}

TEST_CASE("zero steps yield the single-snapshot history") {
    const auto grid = build_grid(-10.0, 10.0, 128);
    const auto psi0 = make_gaussian(grid, 0.0, 0.0, 1.0);
    const auto hist = propagate(psi0, Free{}, {}, 0.0, 1e-3, 1);
    CHECK(hist.size() == 1);
    CHECK(l2_distance(hist.snapshots[0], psi0) == 0.0);
}

TEST_CASE("norm drift over 1e4 steps stays below 1e-9") {
    const auto grid = build_grid(-16.0, 16.0, 256);
    const PhysicalConstants c{};
    const auto psi0 = normalize(analytic_coherent_state(grid, 1.0, 1.0, c, 0.0));
    const auto hist = propagate(psi0, Harmonic{1.0}, c, 10.0, 1e-3, 10000);
    CHECK(std::abs(discrete_norm(hist.snapshots.back()) - 1.0) < 1e-9);
}

TEST_CASE("Strang splitting converges at second order") {
    // coarse grid so the dt ladder stays inside the phase-wrap bound
    const auto grid = build_grid(-16.0, 16.0, 128);
    const PhysicalConstants c{};
    const double omega = 1.0, x_c = 1.0, t = 1.0;
    const auto psi0 = normalize(analytic_coherent_state(grid, x_c, omega, c, 0.0));
    const auto ref = analytic_coherent_state(grid, x_c, omega, c, t);

    std::vector<double> errs;
    for (double dt : {2e-2, 1e-2, 5e-3, 2.5e-3}) {
        const int steps = static_cast<int>(std::llround(t / dt));
        const auto hist = propagate(psi0, Harmonic{omega}, c, t, dt, steps);
        errs.push_back(l2_distance(hist.snapshots.back(), ref));
    }
    for (size_t i = 0; i + 1 < errs.size(); ++i) {
        const double ratio = errs[i] / errs[i + 1];
        CHECK(ratio > 3.4);
        CHECK(ratio < 4.6);
    }
}

TEST_CASE("forward then backward propagation restores psi0") {
    const auto grid = build_grid(-16.0, 16.0, 512);
    const PhysicalConstants c{};
    const auto psi0 = make_two_gaussian(grid, 0.0, 4.0, 0.5, 1.0);
    const auto fwd = propagate(psi0, Harmonic{1.0}, c, 1.0, 1e-3, 1000);
    const auto back =
        SplitOperator(grid, Harmonic{1.0}, c).step(fwd.snapshots.back(), -1e-3);
    // one explicit negative step, then finish the return trip
    auto state = back;
    SplitOperator op(grid, Harmonic{1.0}, c);
    for (int s = 1; s < 1000; ++s) state = op.step(state, -1e-3);
    CHECK(l2_distance(state, psi0) < 1e-8);
}

TEST_CASE("discrete continuity residual shrinks at second order in dt") {
    const auto grid = build_grid(-16.0, 16.0, 128);
    const PhysicalConstants c{};
    const double omega = 1.0;
    const auto psi_t = normalize(analytic_coherent_state(grid, 1.0, omega, c, 0.3));
    SplitOperator op(grid, Harmonic{omega}, c);

    auto residual = [&](double dt) {
        const auto full = op.step(psi_t, dt);
        const auto half = op.step(psi_t, 0.5 * dt);
        const auto rho0 = density(psi_t);
        const auto rho1 = density(full);
        const auto j = probability_current(half, c);
        std::vector<std::complex<double>> jc(j.begin(), j.end());
        const auto dj = spectral_derivative(grid, jc);
        double worst = 0.0;
        for (int k = 0; k < grid.n_points; ++k) {
            const double r =
                (rho1.values[k] - rho0.values[k]) / dt + dj[k].real();
            worst = std::max(worst, std::abs(r));
        }
        return worst;
    };

    std::vector<double> res;
    for (double dt : {4e-2, 2e-2, 1e-2, 5e-3}) res.push_back(residual(dt));
    for (size_t i = 0; i + 1 < res.size(); ++i) {
        const double order = std::log2(res[i] / res[i + 1]);
        CHECK(order > 1.9);
    }
}

TEST_CASE("propagate validates its inputs") {
    const auto grid = build_grid(-10.0, 10.0, 128);
    const auto psi0 = make_gaussian(grid, 0.0, 0.0, 1.0);
    CHECK_THROWS_AS(propagate(psi0, Free{}, {}, 1.0, 1e-3, 7), std::invalid_argument);
    CHECK_THROWS_AS(propagate(psi0, Free{}, {}, 1.0005, 1e-3, 1), std::invalid_argument);
    WaveField bad = psi0;
    for (auto& a : bad.amp) a *= 2.0;
    CHECK_THROWS_AS(propagate(bad, Free{}, {}, 1.0, 1e-3, 1), std::invalid_argument);
}
