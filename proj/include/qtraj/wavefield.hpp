#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qtraj/grid.hpp"

namespace qtraj {

/// Relative density threshold below which a grid point counts as a node of
/// psi. Below this the phase and the velocity quotient J/rho carry no
/// double-precision information.
inline constexpr double kNodeEps = 1e-12;

/// Complex amplitudes on a grid at one instant.
struct WaveField {
    SpatialGrid grid;
    double time = 0.0;
    std::vector<std::complex<double>> amp;
};

/// rho = |psi|^2 on the grid.
struct DensityField {
    SpatialGrid grid;
    double time = 0.0;
    std::vector<double> values;
};

/// Unwrapped phase action S = hbar * arg(psi). node_flag marks points where
/// the density is below kNodeEps * max density; the unwrap restarts after
/// each flagged run since the phase sheets on the two sides of a node are
/// genuinely disconnected.
struct ActionField {
    SpatialGrid grid;
    double time = 0.0;
    std::vector<double> values;
    std::vector<std::uint8_t> node_flag;
};

/// Discrete L2 norm sqrt(sum |psi_k|^2 dx).
double discrete_norm(const WaveField& psi);

/// Rescales to discrete norm 1. Throws std::domain_error on the zero field.
WaveField normalize(const WaveField& psi);

DensityField density(const WaveField& psi);

/// Probability current J = (hbar/m) Im(psi* d/dx psi), spectral gradient.
std::vector<double> probability_current(const WaveField& psi,
                                        const PhysicalConstants& consts);

ActionField phase_action(const WaveField& psi, const PhysicalConstants& consts);

/// <x> = sum x_k |psi_k|^2 dx. Caller supplies a normalized field.
double expectation_position(const WaveField& psi);

double expectation_position(const DensityField& rho);

/// sqrt(sum |a_k - b_k|^2 dx); fields must share a grid.
double l2_distance(const WaveField& a, const WaveField& b);

/// |<a|b>| with the discrete inner product.
double fidelity(const WaveField& a, const WaveField& b);

/// Periodic Catmull-Rom interpolation of a gridded real field.
double interpolate_periodic(const SpatialGrid& grid,
                            const std::vector<double>& values, double x);

}  // namespace qtraj
