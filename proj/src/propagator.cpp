#include "qtraj/propagator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qtraj {

using cplx = std::complex<double>;

int WaveHistory::snapshot_index(double t) const {
    if (snapshots.empty()) throw std::out_of_range("empty history");
    if (dt_snapshot <= 0.0) {
        if (std::abs(t - t0) < 1e-9) return 0;
        throw std::out_of_range("t is not a snapshot time");
    }
    const double s = (t - t0) / dt_snapshot;
    const int i = static_cast<int>(std::llround(s));
    if (i < 0 || i >= size() || std::abs(t - snapshots[i].time) > 1e-9)
        throw std::out_of_range("t is not a snapshot time");
    return i;
}

SplitOperator::SplitOperator(const SpatialGrid& grid, const Potential& pot,
                             const PhysicalConstants& consts)
    : grid_(grid), pot_(pot), consts_(consts),
      v_(evaluate_potential(pot, grid, consts)), k_(grid.wavenumbers()),
      fft_(grid.n_points) {
    validate(consts);
}

double SplitOperator::max_step() const {
    const double knyq = grid_.nyquist_wavenumber();
    return 4.0 * M_PI * consts_.mass / (consts_.hbar * knyq * knyq);
}

void SplitOperator::make_tables(double dt, std::vector<cplx>& half_kick,
                                std::vector<cplx>& kinetic) const {
    const int n = grid_.n_points;
    half_kick.resize(n);
    kinetic.resize(n);
    const double hb = consts_.hbar;
    const double m = consts_.mass;
    for (int j = 0; j < n; ++j) {
        half_kick[j] = std::exp(cplx(0.0, -0.5 * v_[j] * dt / hb));
        kinetic[j] = std::exp(cplx(0.0, -0.5 * hb * k_[j] * k_[j] * dt / m));
    }
}

void SplitOperator::apply(std::vector<cplx>& amp, const std::vector<cplx>& half_kick,
                          const std::vector<cplx>& kinetic) const {
    const int n = grid_.n_points;
    for (int j = 0; j < n; ++j) amp[j] *= half_kick[j];
    fft_.forward(amp);
    for (int j = 0; j < n; ++j) amp[j] *= kinetic[j];
    fft_.inverse(amp);
    for (int j = 0; j < n; ++j) amp[j] *= half_kick[j];
}

namespace {
void check_step_size(double dt, double max_step) {
    if (dt == 0.0) throw std::invalid_argument("dt must be nonzero");
    if (std::abs(dt) >= max_step)
        throw std::invalid_argument(
            "dt " + std::to_string(dt) +
            " violates the Nyquist phase-wrap bound (max |dt| " +
            std::to_string(max_step) + ")");
}
}  // namespace

WaveField SplitOperator::step(const WaveField& psi, double dt) const {
    if (!(psi.grid == grid_)) throw std::invalid_argument("grid mismatch");
    check_step_size(dt, max_step());
    std::vector<cplx> half_kick, kinetic;
    make_tables(dt, half_kick, kinetic);
    WaveField out = psi;
    apply(out.amp, half_kick, kinetic);
    out.time = psi.time + dt;
    return out;
}

WaveHistory SplitOperator::propagate(const WaveField& psi0, double t_final,
                                     double dt, int snapshot_every) const {
    if (!(psi0.grid == grid_)) throw std::invalid_argument("grid mismatch");
    if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
    if (t_final < 0.0) throw std::invalid_argument("t_final must be >= 0");
    if (std::abs(discrete_norm(psi0) - 1.0) > 1e-9)
        throw std::invalid_argument("psi0 must be normalized");

    WaveHistory hist;
    hist.t0 = psi0.time;
    hist.consts = consts_;
    hist.potential = pot_;

    const long n_steps = std::llround(t_final / dt);
    if (std::abs(n_steps * dt - t_final) > 1e-9 * std::max(1.0, std::abs(t_final)))
        throw std::invalid_argument("t_final is not an integer number of steps");
    if (n_steps % snapshot_every != 0)
        throw std::invalid_argument("step count not divisible by snapshot_every");
    if (n_steps > 0) check_step_size(dt, max_step());

    hist.dt_snapshot = dt * snapshot_every;
    hist.snapshots.reserve(static_cast<size_t>(n_steps / snapshot_every) + 1);
    hist.snapshots.push_back(psi0);

    if (n_steps == 0) return hist;

    std::vector<cplx> half_kick, kinetic;
    make_tables(dt, half_kick, kinetic);
    std::vector<cplx> amp = psi0.amp;
    for (long s = 1; s <= n_steps; ++s) {
        apply(amp, half_kick, kinetic);
        if (s % snapshot_every == 0) {
            WaveField snap;
            snap.grid = grid_;
            snap.time = hist.t0 + (static_cast<double>(s) / snapshot_every) * hist.dt_snapshot;
            snap.amp = amp;
            hist.snapshots.push_back(std::move(snap));
        }
    }
    return hist;
}

WaveField step(const WaveField& psi, const Potential& pot,
               const PhysicalConstants& consts, double dt) {
    return SplitOperator(psi.grid, pot, consts).step(psi, dt);
}

WaveHistory propagate(const WaveField& psi0, const Potential& pot,
                      const PhysicalConstants& consts, double t_final, double dt,
                      int snapshot_every) {
    return SplitOperator(psi0.grid, pot, consts)
        .propagate(psi0, t_final, dt, snapshot_every);
}

double free_gaussian_width(double sigma0, const PhysicalConstants& consts,
                           double t) {
    const double tau = consts.hbar * t / (2.0 * consts.mass * sigma0 * sigma0);
    return sigma0 * std::sqrt(1.0 + tau * tau);
}

WaveField analytic_free_gaussian(const SpatialGrid& grid, double x_c, double k0,
                                 double sigma0, const PhysicalConstants& consts,
                                 double t) {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
    const double hb = consts.hbar, m = consts.mass;
    const double s2 = sigma0 * sigma0;
    const cplx beta(s2, 0.5 * hb * t / m);
    const double v0 = hb * k0 / m;
    const double mu = x_c + v0 * t;
    const double norm = std::pow(2.0 * M_PI * s2, -0.25);
    const cplx pref = norm * std::sqrt(cplx(s2, 0.0) / beta);
    const double carrier_t = -0.5 * hb * k0 * k0 * t / m;

    WaveField psi;
    psi.grid = grid;
    psi.time = t;
    psi.amp.resize(grid.n_points);
    for (int k = 0; k < grid.n_points; ++k) {
        const double x = grid.x(k);
        const double y = x - mu;
        psi.amp[k] = pref * std::exp(-y * y / (4.0 * beta) +
                                     cplx(0.0, k0 * (x - x_c) + carrier_t));
    }
    return psi;
}

WaveField analytic_coherent_state(const SpatialGrid& grid, double x_c,
                                  double omega, const PhysicalConstants& consts,
                                  double t) {
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
    const double hb = consts.hbar, m = consts.mass;
    const double a = x_c;
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    const double norm = std::pow(m * omega / (M_PI * hb), 0.25);

    WaveField psi;
    psi.grid = grid;
    psi.time = t;
    psi.amp.resize(grid.n_points);
    for (int k = 0; k < grid.n_points; ++k) {
        const double x = grid.x(k);
        const double y = x - a * c;
        const double phase = -(0.5 * omega * t +
                               (m * omega / hb) * (a * x * s - 0.25 * a * a *
                                                   std::sin(2.0 * omega * t)));
        psi.amp[k] = norm * std::exp(-0.5 * m * omega * y * y / hb) *
                     std::exp(cplx(0.0, phase));
    }
    return psi;
}

}  // namespace qtraj
