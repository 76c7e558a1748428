#include "qtraj/states.hpp"

#include <cmath>
#include <stdexcept>

namespace qtraj {

using cplx = std::complex<double>;

WaveField make_gaussian(const SpatialGrid& grid, double center, double k0,
                        double sigma0) {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
    WaveField psi;
    psi.grid = grid;
    psi.amp.resize(grid.n_points);
    const double norm = std::pow(2.0 * M_PI * sigma0 * sigma0, -0.25);
    for (int k = 0; k < grid.n_points; ++k) {
        const double y = grid.x(k) - center;
        psi.amp[k] = norm * std::exp(-y * y / (4.0 * sigma0 * sigma0)) *
                     std::exp(cplx(0.0, k0 * y));
    }
    return normalize(psi);
}

double plane_wave_wavenumber(const SpatialGrid& grid, int mode) {
    return mode * 2.0 * M_PI / grid.length();
}

WaveField make_plane_wave(const SpatialGrid& grid, int mode) {
    WaveField psi;
    psi.grid = grid;
    psi.amp.resize(grid.n_points);
    const double k0 = plane_wave_wavenumber(grid, mode);
    const double a = 1.0 / std::sqrt(grid.length());
    for (int k = 0; k < grid.n_points; ++k)
        psi.amp[k] = a * std::exp(cplx(0.0, k0 * grid.x(k)));
    return psi;
}

WaveField make_two_gaussian(const SpatialGrid& grid, double center,
                            double separation, double k0, double sigma0) {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
    WaveField psi;
    psi.grid = grid;
    psi.amp.resize(grid.n_points);
    const double cl = center - 0.5 * separation;
    const double cr = center + 0.5 * separation;
    for (int k = 0; k < grid.n_points; ++k) {
        const double x = grid.x(k);
        const double gl = std::exp(-(x - cl) * (x - cl) / (4.0 * sigma0 * sigma0));
        const double gr = std::exp(-(x - cr) * (x - cr) / (4.0 * sigma0 * sigma0));
        psi.amp[k] = (gl + gr) * std::exp(cplx(0.0, k0 * x));
    }
    return normalize(psi);
}

WaveField make_harmonic_ground_state(const SpatialGrid& grid, double omega,
                                     const PhysicalConstants& consts) {
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
    const double sigma0 = std::sqrt(consts.hbar / (2.0 * consts.mass * omega));
    return make_gaussian(grid, 0.0, 0.0, sigma0);
}

}  // namespace qtraj
