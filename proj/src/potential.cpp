#include "qtraj/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace qtraj {

std::vector<double> evaluate_potential(const Potential& v, const SpatialGrid& grid,
                                       const PhysicalConstants& consts) {
    std::vector<double> out(grid.n_points, 0.0);
    if (std::holds_alternative<Free>(v)) return out;
    if (const auto* h = std::get_if<Harmonic>(&v)) {
        if (!(h->omega > 0.0)) throw std::invalid_argument("harmonic omega must be > 0");
        const double c = 0.5 * consts.mass * h->omega * h->omega;
        for (int k = 0; k < grid.n_points; ++k) {
            const double x = grid.x(k);
            out[k] = c * x * x;
        }
        return out;
    }
    if (const auto* b = std::get_if<GaussianBarrier>(&v)) {
        if (!(b->width > 0.0)) throw std::invalid_argument("barrier width must be > 0");
        for (int k = 0; k < grid.n_points; ++k) {
            const double y = grid.x(k) - b->center;
            out[k] = b->height * std::exp(-y * y / (2.0 * b->width * b->width));
        }
        return out;
    }
    const auto& t = std::get<Tabulated>(v);
    if (static_cast<int>(t.values.size()) != grid.n_points)
        throw std::invalid_argument("tabulated potential length != n_points");
    return t.values;
}

}  // namespace qtraj
