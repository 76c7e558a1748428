#include "qtraj/grid.hpp"

#include <cmath>

namespace qtraj {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

SpatialGrid build_grid(double x_min, double x_max, int n_points) {
    if (!(x_max > x_min))
        throw std::invalid_argument("grid interval is degenerate: x_max <= x_min");
    if (!is_power_of_two(n_points) || n_points < 16)
        throw std::invalid_argument("n_points must be a power of two >= 16");
    SpatialGrid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_points = n_points;
    g.dx = (x_max - x_min) / n_points;
    return g;
}

int SpatialGrid::cell_index(double pos) const {
    double s = (pos - x_min) / dx;
    int k = static_cast<int>(std::floor(s));
    k %= n_points;
    if (k < 0) k += n_points;
    return k;
}

std::vector<double> SpatialGrid::wavenumbers() const {
    const double dk = 2.0 * M_PI / length();
    std::vector<double> k(n_points);
    for (int j = 0; j < n_points; ++j) {
        int m = (j < n_points / 2) ? j : j - n_points;
        k[j] = m * dk;
    }
    return k;
}

double SpatialGrid::nyquist_wavenumber() const { return M_PI / dx; }

}  // namespace qtraj
