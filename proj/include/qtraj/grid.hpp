#pragma once

#include <stdexcept>
#include <vector>

namespace qtraj {

/// Physical constants of the one-particle problem. Units are whatever the
/// scenario author chooses; everything downstream is expressed in hbar and
/// mass only (noise scale sqrt(hbar/mass), kinetic factor hbar/2m, ...).
struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;
};

inline void validate(const PhysicalConstants& c) {
    if (!(c.hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
    if (!(c.mass > 0.0)) throw std::invalid_argument("mass must be > 0");
}

/// Uniform periodic grid on [x_min, x_max). x_max is identified with x_min;
/// n_points must be a power of two so the spectral stepper can run radix-2
/// transforms without padding.
struct SpatialGrid {
    double x_min = 0.0;
    double x_max = 0.0;
    int n_points = 0;
    double dx = 0.0;

    double x(int k) const { return x_min + k * dx; }
    double length() const { return x_max - x_min; }

    bool contains(double pos) const { return pos >= x_min && pos < x_max; }

    /// Index of the cell containing pos, wrapped periodically.
    int cell_index(double pos) const;

    /// Wavenumbers in FFT order: 0, dk, ..., (n/2-1)dk, -(n/2)dk, ..., -dk.
    std::vector<double> wavenumbers() const;

    /// Largest representable wavenumber magnitude, pi/dx.
    double nyquist_wavenumber() const;

    bool operator==(const SpatialGrid& other) const {
        return x_min == other.x_min && x_max == other.x_max &&
               n_points == other.n_points;
    }
};

bool is_power_of_two(int n);

/// Builds a grid; throws std::invalid_argument on a degenerate interval or a
/// point count that is not a power of two >= 16.
SpatialGrid build_grid(double x_min, double x_max, int n_points);

}  // namespace qtraj
