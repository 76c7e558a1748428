#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtraj/propagator.hpp"
#include "qtraj/trajectory.hpp"
#include "qtraj/wavefield.hpp"

namespace qtraj {

/// Density snapshots indexed by time; the form the statistical checks
/// consume, reconstructable from a run directory.
struct DensitySeries {
    std::vector<double> times;
    std::vector<DensityField> fields;

    static DensitySeries from_history(const WaveHistory& history);
    const DensityField& at_time(double t) const;  // throws when absent
    double mean_position(double t) const;
};

/// Normalized histogram of positions on a coarsening of the grid; n_bins
/// must divide n_points.
DensityField histogram_density(const std::vector<double>& positions,
                               const SpatialGrid& grid, int n_bins);

/// Bin-averaged density on the same coarse grid histogram_density uses.
DensityField coarsen_density(const DensityField& rho, int n_bins);

/// (1/2) sum |rho1 - rho2| dx; grids must match.
double total_variation(const DensityField& rho1, const DensityField& rho2);

struct CheckEntry {
    std::string name;
    double time = 0.0;
    long n = 0;
    double statistic = 0.0;
    double std_error = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ConsistencyReport {
    std::vector<CheckEntry> entries;
    bool all_pass() const;
};

/// Ensemble mean of X(t) against the density mean <x>(t); threshold is four
/// standard errors. Requires >= 1000 survivors.
void check_mean_consistency(ConsistencyReport& report, const EnsembleRecord& record,
                            const DensitySeries& series,
                            const std::vector<double>& times);

/// Mean fluctuation increment between consecutive recorded times against a
/// four-standard-error band around zero. Rejects Zero-noise ensembles, whose
/// zeta vanishes identically.
void zeta_mean_check(ConsistencyReport& report, const EnsembleRecord& record,
                     const std::vector<double>& times);

/// TV between the ensemble histogram and the coarsened density at each time.
void equivariance_check(ConsistencyReport& report, const EnsembleRecord& record,
                        const DensitySeries& series, const std::vector<double>& times,
                        int n_bins, double tv_threshold);

/// Ensemble mean of G(t) (the Monte Carlo estimate of the psi0-weighted
/// integral) against a four-standard-error band around zero.
void g_constraint_check(ConsistencyReport& report, const EnsembleRecord& record,
                        const DensitySeries& series,
                        const std::vector<double>& times);

struct CkResult {
    double residual = 0.0;
    double noise_floor = 0.0;  // bootstrap percentile under the Markov null
    int n_rows = 0;
    bool pass = false;
};

/// Composition test on binned transition kernels estimated from the ensemble
/// at t0 < t1 < t2: max-row half-L1 distance between the direct kernel
/// P(t2 <- t0) and the composition P(t2 <- t1) P(t1 <- t0). Bins are uniform
/// over [x_lo, x_hi] with the outermost bins catching the tails. Every
/// visited bin at t0 and t1 must hold >= 50 samples. The noise floor is the
/// 99th percentile of the residual under a parametric bootstrap of the
/// Markov null (t2 bins redrawn from the estimated t1 -> t2 kernel).
CkResult chapman_kolmogorov_residual(const EnsembleRecord& record, double t0,
                                     double t1, double t2, int n_bins, double x_lo,
                                     double x_hi, int n_bootstrap = 200,
                                     std::uint64_t bootstrap_seed = 7777);

/// Two states with identical position densities but phases differing by
/// exp(i k0 x), propagated to time t: the TV between the resulting densities.
/// Any value above discretization noise certifies that no kernel acting on
/// position densities alone can reproduce the wave evolution.
double markov_obstruction_demo(const SpatialGrid& grid, const Potential& pot,
                               const PhysicalConstants& consts, double k0, double t,
                               double dt, double sigma0 = 1.0);

std::string report_to_text(const ConsistencyReport& report);

}  // namespace qtraj
