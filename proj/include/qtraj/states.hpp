#pragma once

#include "qtraj/grid.hpp"
#include "qtraj/wavefield.hpp"

namespace qtraj {

/// Gaussian packet exp(-(x-center)^2 / 4 sigma0^2) * exp(i k0 (x-center)),
/// normalized on the grid. The position density has standard deviation
/// sigma0 and the mean momentum is hbar*k0.
WaveField make_gaussian(const SpatialGrid& grid, double center, double k0,
                        double sigma0);

/// Plane wave exp(i k x)/sqrt(L) with k = mode * 2*pi/L, an exact grid mode,
/// so the discrete norm is exactly 1.
WaveField make_plane_wave(const SpatialGrid& grid, int mode);

double plane_wave_wavenumber(const SpatialGrid& grid, int mode);

/// Symmetric superposition of two Gaussians at center +- separation/2 with a
/// common carrier k0, normalized on the grid.
WaveField make_two_gaussian(const SpatialGrid& grid, double center,
                            double separation, double k0, double sigma0);

/// Ground state of the harmonic well, width sigma0^2 = hbar/(2 m omega).
WaveField make_harmonic_ground_state(const SpatialGrid& grid, double omega,
                                     const PhysicalConstants& consts);

}  // namespace qtraj
