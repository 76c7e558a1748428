#pragma once

#include <variant>
#include <vector>

#include "qtraj/grid.hpp"

namespace qtraj {

struct Free {};

struct Harmonic {
    double omega = 1.0;
};

/// Smooth Gaussian bump height * exp(-(x-center)^2 / (2 width^2)). A hard
/// step would ring under the spectral stepper.
struct GaussianBarrier {
    double height = 1.0;
    double width = 1.0;
    double center = 0.0;
};

struct Tabulated {
    std::vector<double> values;
};

using Potential = std::variant<Free, Harmonic, GaussianBarrier, Tabulated>;

/// Samples V on the grid; validates the variant's parameters.
std::vector<double> evaluate_potential(const Potential& v, const SpatialGrid& grid,
                                       const PhysicalConstants& consts);

}  // namespace qtraj
