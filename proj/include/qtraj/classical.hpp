#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "qtraj/grid.hpp"
#include "qtraj/trajectory.hpp"
#include "qtraj/wavefield.hpp"

namespace qtraj {

/// Free motion with linear initial action S0 = p0 q.
struct FreeParticleScenario {
    double p0 = 0.0;
};

/// Harmonic well with quadratic initial action
/// S0(q) = (m a0 / 2) q^2 + b0 q, the family closed under Hamilton-Jacobi
/// evolution. The flow is affine, q(t) = q0 f(t) + g(t), with
/// f = cos wt + (a0/w) sin wt and g = (b0 / m w) sin wt; f -> 0 is a caustic
/// and evaluation near it throws.
struct HarmonicScenario {
    double omega = 1.0;
    double a0 = 0.0;
    double b0 = 0.0;
};

struct ClassicalScenario {
    std::variant<FreeParticleScenario, HarmonicScenario> kind;
    double mass = 1.0;
};

double classical_action(const ClassicalScenario& sc, double q, double t);
double classical_velocity(const ClassicalScenario& sc, double q, double t);

/// Characteristic through q0 and the Jacobian d q(t) / d q0 of the flow.
double classical_flow(const ClassicalScenario& sc, double q0, double t);
double classical_flow_jacobian(const ClassicalScenario& sc, double t);

/// RK4 on dq/dt = v(q, t); exact for these closed forms up to scheme error.
/// t_final = 0 yields the single-point trajectory at q0.
Trajectory integrate_classical(const ClassicalScenario& sc, double q0,
                               double t_final, double dt);

/// Push-forward of rho0 along the characteristics (Jacobian-weighted method
/// of characteristics). Preimages outside the grid carry zero density: the
/// classical flow is not periodic.
DensityField transport_density(const ClassicalScenario& sc,
                               const DensityField& rho0, double t);

/// Max |dS/dt + (1/2m)(dS/dq)^2 + V| over an (q, t) lattice, with the
/// partials taken by fourth-order central differences of the closed-form S,
/// as an independent route against the coded velocity field.
double max_hj_residual(const ClassicalScenario& sc, double q_lo, double q_hi,
                       double t_lo, double t_hi, int nq, int nt);

/// Scaling study of the classical limit: rerun the full quantum pipeline at
/// each hbar and measure the ensemble-mean sup deviation from the classical
/// trajectory that shares the trajectory's own r0.
enum class ScalingScenario { FreeGaussian, HarmonicCoherent };

struct HbarScalingParams {
    ScalingScenario scenario = ScalingScenario::FreeGaussian;
    SpatialGrid grid;
    double mass = 1.0;
    double sigma0 = 1.0;  // FreeGaussian packet width (k0 = 0, at rest)
    double x_c = 1.0;     // HarmonicCoherent displacement
    double omega = 1.0;
    std::vector<double> hbar_list;  // strictly decreasing
    int n_trajectories = 1000;
    std::uint64_t base_seed = 0;
    NoiseKind noise = NoiseKind::WhiteNoise;
    double t_final = 1.0;
    double dt = 1e-3;
    int snapshot_every = 10;
    double dt_sub = 1e-3;
    int record_every = 10;
    int workers = 1;
};

struct HbarScalingReport {
    std::vector<double> hbars;
    std::vector<double> mean_sup_deviation;
    /// Least-squares slope of log D vs log hbar.
    double slope = 0.0;
};

/// The classical trajectory matched to a quantum scaling scenario: constant
/// q0 for the free packet at rest, rigid transport q0 + x_c (cos wt - 1) for
/// the coherent state (whose guidance field is space-independent, so its
/// hbar -> 0 flow translates rigidly).
double matched_classical_trajectory(const HbarScalingParams& p, double r0, double t);

HbarScalingReport hbar_scaling_study(const HbarScalingParams& p);

}  // namespace qtraj
