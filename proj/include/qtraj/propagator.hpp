#pragma once

#include <vector>

#include "qtraj/fft.hpp"
#include "qtraj/grid.hpp"
#include "qtraj/potential.hpp"
#include "qtraj/wavefield.hpp"

namespace qtraj {

/// Time-ordered snapshots of one propagation, uniformly spaced. Immutable
/// once built; trajectory integrators interpolate between snapshots.
struct WaveHistory {
    std::vector<WaveField> snapshots;
    double t0 = 0.0;
    double dt_snapshot = 0.0;
    PhysicalConstants consts;
    Potential potential;

    int size() const { return static_cast<int>(snapshots.size()); }
    double t_final() const { return snapshots.empty() ? t0 : snapshots.back().time; }
    const WaveField& at(int i) const { return snapshots.at(i); }

    /// Index of the snapshot at time t (within 1e-9 absolute); throws
    /// std::out_of_range when t is not a snapshot time.
    int snapshot_index(double t) const;
};

/// Strang split-operator stepper: half potential kick, full kinetic step in
/// wavenumber space, half potential kick. Unitary per step up to roundoff.
class SplitOperator {
  public:
    SplitOperator(const SpatialGrid& grid, const Potential& pot,
                  const PhysicalConstants& consts);

    /// One step of size dt (dt < 0 steps backward in time). Throws
    /// std::invalid_argument when |dt| exceeds the phase-wrap bound: the
    /// kinetic phase at the Nyquist mode must stay below one full turn or
    /// the top of the spectrum aliases.
    WaveField step(const WaveField& psi, double dt) const;

    /// Evolves psi0 (normalized, time 0) to t_final with fixed dt, recording
    /// every snapshot_every steps. t_final must be an integer number of
    /// steps and of snapshot strides.
    WaveHistory propagate(const WaveField& psi0, double t_final, double dt,
                          int snapshot_every) const;

    /// Largest |dt| accepted by the phase-wrap guard.
    double max_step() const;

  private:
    void apply(std::vector<std::complex<double>>& amp,
               const std::vector<std::complex<double>>& half_kick,
               const std::vector<std::complex<double>>& kinetic) const;
    void make_tables(double dt, std::vector<std::complex<double>>& half_kick,
                     std::vector<std::complex<double>>& kinetic) const;

    SpatialGrid grid_;
    Potential pot_;
    PhysicalConstants consts_;
    std::vector<double> v_;
    std::vector<double> k_;
    Fft fft_;
};

/// Contract-level single step; builds a transient stepper.
WaveField step(const WaveField& psi, const Potential& pot,
               const PhysicalConstants& consts, double dt);

WaveHistory propagate(const WaveField& psi0, const Potential& pot,
                      const PhysicalConstants& consts, double t_final, double dt,
                      int snapshot_every);

/// Exact free evolution of a Gaussian packet (mean momentum hbar*k0, initial
/// position density std sigma0, center x_c), evaluated on the grid at time t.
/// Width law: sigma(t) = sigma0 * sqrt(1 + (hbar t / 2 m sigma0^2)^2).
WaveField analytic_free_gaussian(const SpatialGrid& grid, double x_c, double k0,
                                 double sigma0, const PhysicalConstants& consts,
                                 double t);

double free_gaussian_width(double sigma0, const PhysicalConstants& consts,
                           double t);

/// Exact coherent state of the harmonic well: the displaced ground state
/// stays a rigid Gaussian of width sqrt(hbar/2 m omega) whose center follows
/// x_c cos(omega t).
WaveField analytic_coherent_state(const SpatialGrid& grid, double x_c,
                                  double omega, const PhysicalConstants& consts,
                                  double t);

}  // namespace qtraj
