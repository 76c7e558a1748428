#include "qtraj/wavefield.hpp"

#include <algorithm>
#include <cmath>

#include "qtraj/fft.hpp"

namespace qtraj {

double discrete_norm(const WaveField& psi) {
    double s = 0.0;
    for (const auto& a : psi.amp) s += std::norm(a);
    return std::sqrt(s * psi.grid.dx);
}

WaveField normalize(const WaveField& psi) {
    const double n = discrete_norm(psi);
    if (!(n > 0.0)) throw std::domain_error("cannot normalize the zero field");
    WaveField out = psi;
    const double inv = 1.0 / n;
    for (auto& a : out.amp) a *= inv;
    return out;
}

DensityField density(const WaveField& psi) {
    DensityField rho;
    rho.grid = psi.grid;
    rho.time = psi.time;
    rho.values.resize(psi.amp.size());
    for (size_t k = 0; k < psi.amp.size(); ++k) rho.values[k] = std::norm(psi.amp[k]);
    return rho;
}

std::vector<double> probability_current(const WaveField& psi,
                                        const PhysicalConstants& consts) {
    const auto dpsi = spectral_derivative(psi.grid, psi.amp);
    std::vector<double> j(psi.amp.size());
    const double scale = consts.hbar / consts.mass;
    for (size_t k = 0; k < psi.amp.size(); ++k)
        j[k] = scale * std::imag(std::conj(psi.amp[k]) * dpsi[k]);
    return j;
}

ActionField phase_action(const WaveField& psi, const PhysicalConstants& consts) {
    const int n = psi.grid.n_points;
    ActionField s;
    s.grid = psi.grid;
    s.time = psi.time;
    s.values.assign(n, 0.0);
    s.node_flag.assign(n, 0);

    double rho_max = 0.0;
    for (const auto& a : psi.amp) rho_max = std::max(rho_max, std::norm(a));
    const double floor = kNodeEps * rho_max;
    for (int k = 0; k < n; ++k)
        if (std::norm(psi.amp[k]) < floor) s.node_flag[k] = 1;

    // Left-to-right unwrap; a flagged run breaks phase continuity, so the
    // next reliable point starts from its raw argument again.
    bool have_prev = false;
    double prev = 0.0;
    for (int k = 0; k < n; ++k) {
        if (s.node_flag[k]) {
            have_prev = false;
            s.values[k] = consts.hbar * std::arg(psi.amp[k]);
            continue;
        }
        double theta = std::arg(psi.amp[k]);
        if (have_prev) {
            double delta = theta - prev;
            delta -= 2.0 * M_PI * std::round(delta / (2.0 * M_PI));
            theta = prev + delta;
        }
        prev = theta;
        have_prev = true;
        s.values[k] = consts.hbar * theta;
    }
    return s;
}

double expectation_position(const WaveField& psi) {
    double s = 0.0;
    for (size_t k = 0; k < psi.amp.size(); ++k)
        s += psi.grid.x(static_cast<int>(k)) * std::norm(psi.amp[k]);
    return s * psi.grid.dx;
}

double expectation_position(const DensityField& rho) {
    double s = 0.0;
    for (size_t k = 0; k < rho.values.size(); ++k)
        s += rho.grid.x(static_cast<int>(k)) * rho.values[k];
    return s * rho.grid.dx;
}

double l2_distance(const WaveField& a, const WaveField& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("grid mismatch");
    double s = 0.0;
    for (size_t k = 0; k < a.amp.size(); ++k) s += std::norm(a.amp[k] - b.amp[k]);
    return std::sqrt(s * a.grid.dx);
}

double fidelity(const WaveField& a, const WaveField& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("grid mismatch");
    std::complex<double> ip{0.0, 0.0};
    for (size_t k = 0; k < a.amp.size(); ++k) ip += std::conj(a.amp[k]) * b.amp[k];
    return std::abs(ip) * a.grid.dx;
}

double interpolate_periodic(const SpatialGrid& grid,
                            const std::vector<double>& values, double x) {
    const int n = grid.n_points;
    double s = (x - grid.x_min) / grid.dx;
    s -= n * std::floor(s / n);
    int i1 = static_cast<int>(std::floor(s));
    double f = s - i1;
    if (i1 >= n) { i1 -= n; }
    const int i0 = (i1 + n - 1) % n;
    const int i2 = (i1 + 1) % n;
    const int i3 = (i1 + 2) % n;
    const double p0 = values[i0], p1 = values[i1], p2 = values[i2], p3 = values[i3];
    // Catmull-Rom: exact at nodes, C1 across cells.
    const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    const double c = -0.5 * p0 + 0.5 * p2;
    return ((a * f + b) * f + c) * f + p1;
}

}  // namespace qtraj
