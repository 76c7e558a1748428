#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qtraj/propagator.hpp"
#include "qtraj/velocity.hpp"

namespace qtraj {

/// Realizations of the fluctuation term. The noise amplitude is always
/// sqrt(hbar/mass), derived from the constants and never a free parameter.
///   Zero          - no fluctuations, drift = current velocity (Bohmian limit)
///   WhiteNoise    - Gaussian kicks, drift = current velocity
///   NelsonOsmotic - Gaussian kicks, drift = current + osmotic (forward drift)
enum class NoiseKind { Zero, WhiteNoise, NelsonOsmotic };

double noise_scale(const PhysicalConstants& consts);

const char* noise_name(NoiseKind kind);

/// One sample path. positions[0] == r0 exactly and zeta[0] == 0. zeta is the
/// running residual X(t) - r0 - integral of the current velocity along the
/// path, accumulated with the same quadrature the stepper uses, so it is
/// exactly zero for Zero noise and exactly the summed kicks for WhiteNoise.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> zeta;
    double r0 = 0.0;
    NoiseKind noise = NoiseKind::Zero;
    std::uint64_t rng_seed = 0;
    bool escaped = false;
};

struct EnsembleSpec {
    int n_trajectories = 0;
    std::uint64_t base_seed = 0;
    NoiseKind noise = NoiseKind::Zero;
    double dt_sub = 0.0;
    int record_every = 1;
    /// Abort threshold on the escaped fraction.
    double max_escape_fraction = 1e-3;
};

/// Column-oriented ensemble output: positions[j][i] is trajectory i at
/// record time times[j]. Escaped paths keep their frozen series and are
/// excluded from every statistic.
struct EnsembleRecord {
    std::vector<double> times;
    std::vector<std::vector<double>> positions;
    std::vector<std::vector<double>> zeta;
    std::vector<double> r0;
    std::vector<std::uint8_t> escaped;
    NoiseKind noise = NoiseKind::Zero;
    std::uint64_t base_seed = 0;

    int n_trajectories() const { return static_cast<int>(r0.size()); }
    int n_times() const { return static_cast<int>(times.size()); }
    int n_escaped() const;
    int n_survivors() const { return n_trajectories() - n_escaped(); }
    int time_index(double t) const;  // throws std::out_of_range if absent
};

struct EscapeRateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Draws n positions from |psi0|^2 by inverse transform on the
/// trapezoid-integrated discrete CDF with linear interpolation inside each
/// cell. Cells of zero density carry zero weight, so points where psi0
/// vanishes are never returned.
std::vector<double> sample_initial_positions(const WaveField& psi0, int n,
                                             std::uint64_t seed);

/// The inverse CDF the sampler inverts: maps u in (0,1) to a position.
double inverse_cdf_position(const WaveField& psi0, double u);

/// Classical RK4 on dx/dt = v_current(x, t). zeta is identically zero.
Trajectory integrate_bohmian(const VelocityInterpolator& field, double r0,
                             double dt_sub, int record_every = 1);
Trajectory integrate_bohmian(const WaveHistory& history, double r0, double dt_sub,
                             int record_every = 1);

/// Heun predictor-corrector step of the guidance SDE: the drift is averaged
/// between the step's start and the predicted end (the discrete symmetric
/// differential), plus a Gaussian increment of std sqrt(hbar/m) sqrt(dt).
Trajectory integrate_stochastic(const VelocityInterpolator& field, double r0,
                                NoiseKind noise, double dt_sub, std::uint64_t seed,
                                int record_every = 1);
Trajectory integrate_stochastic(const WaveHistory& history, double r0,
                                NoiseKind noise, double dt_sub, std::uint64_t seed,
                                int record_every = 1);

/// Integrates spec.n_trajectories paths over the history span with initial
/// positions sampled from the first snapshot. Trajectory i uses seed
/// base_seed + i, so the result is bit-identical for any worker count.
/// Throws EscapeRateError when the escaped fraction exceeds the spec limit.
EnsembleRecord run_ensemble(const WaveHistory& history, const EnsembleSpec& spec,
                            int workers = 1);

/// Per-trajectory G(t) = X(t) - r0 * rho_t(r0) / rho_0(r0), the decomposition
/// remainder of the mean-consistency identity, evaluated at each trajectory's
/// own initial point. Its ensemble mean estimates the psi0-weighted integral
/// constrained to vanish.
struct GResult {
    std::vector<double> values;  // surviving, unskipped trajectories
    double mean = 0.0;
    double std_error = 0.0;
    int n_used = 0;
    int n_skipped = 0;  // initial density below the node floor
};

GResult compute_G(const EnsembleRecord& record, const WaveHistory& history,
                  double t);

/// Same computation from stored densities: rho0 at the initial time, rho_t
/// at the queried time.
GResult compute_G(const EnsembleRecord& record, const DensityField& rho0,
                  const DensityField& rho_t, double t);

}  // namespace qtraj
