#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "qtraj/propagator.hpp"
#include "qtraj/wavefield.hpp"

namespace qtraj {

/// A drift field on the grid at one instant. reliable is false exactly where
/// the density sits below kNodeEps times its maximum; values there come from
/// a floored denominator and are capped, good enough to step an integrator
/// through but not to trust in statistics.
struct VelocityField {
    SpatialGrid grid;
    double time = 0.0;
    std::vector<double> values;
    std::vector<std::uint8_t> reliable;
};

inline constexpr double kNoCap = std::numeric_limits<double>::infinity();

/// Current velocity v = J / rho with the denominator floored at
/// kNodeEps * max rho and |v| capped at v_cap.
VelocityField bohm_velocity(const WaveField& psi, const PhysicalConstants& consts,
                            double v_cap = kNoCap);

/// Osmotic velocity u = (hbar/2m) rho'/rho, same node handling. Computed as
/// (hbar/m) Re(psi* psi') / rho, which is the identical quotient without
/// differentiating the squared field.
VelocityField osmotic_velocity(const WaveField& psi, const PhysicalConstants& consts,
                               double v_cap = kNoCap);

enum class VelocityKind { Current, Osmotic, Forward, Backward };

/// Evaluates drift fields anywhere inside a history's space-time slab:
/// Catmull-Rom in x on the two bracketing snapshots, linear in t between
/// them. Per-snapshot fields are cached up front, so eval is cheap and
/// const-thread-safe.
class VelocityInterpolator {
  public:
    VelocityInterpolator(const WaveHistory& history, double v_cap = kNoCap);

    struct Sample {
        double value = 0.0;
        bool reliable = true;
    };

    /// Throws std::out_of_range when t is outside the history span or x is
    /// outside the grid interval.
    Sample eval(VelocityKind kind, double x, double t) const;

    const SpatialGrid& grid() const { return grid_; }
    const PhysicalConstants& consts() const { return consts_; }
    double t0() const { return t0_; }
    double t_final() const { return t_final_; }
    double v_cap() const { return v_cap_; }

  private:
    Sample eval_one(const std::vector<VelocityField>& fields, double x,
                    double t) const;
    void locate(double t, int& i, double& w) const;

    SpatialGrid grid_;
    PhysicalConstants consts_;
    double t0_ = 0.0;
    double t_final_ = 0.0;
    double dt_snap_ = 0.0;
    double v_cap_ = kNoCap;
    std::vector<VelocityField> current_;
    std::vector<VelocityField> osmotic_;
};

}  // namespace qtraj
