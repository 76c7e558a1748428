#include "qtraj/velocity.hpp"

#include <algorithm>
#include <cmath>

#include "qtraj/fft.hpp"

namespace qtraj {

namespace {

enum class Part { Imag, Real };

VelocityField quotient_field(const WaveField& psi, const PhysicalConstants& consts,
                             double v_cap, Part part) {
    const int n = psi.grid.n_points;
    VelocityField f;
    f.grid = psi.grid;
    f.time = psi.time;
    f.values.resize(n);
    f.reliable.assign(n, 1);

    const auto dpsi = spectral_derivative(psi.grid, psi.amp);
    double rho_max = 0.0;
    for (const auto& a : psi.amp) rho_max = std::max(rho_max, std::norm(a));
    const double floor = kNodeEps * rho_max;
    const double scale = consts.hbar / consts.mass;

    for (int k = 0; k < n; ++k) {
        const double rho = std::norm(psi.amp[k]);
        if (rho < floor) f.reliable[k] = 0;
        const auto q = std::conj(psi.amp[k]) * dpsi[k];
        const double num = (part == Part::Imag) ? q.imag() : q.real();
        double v = scale * num / std::max(rho, floor);
        f.values[k] = std::clamp(v, -v_cap, v_cap);
    }
    return f;
}

}  // namespace

VelocityField bohm_velocity(const WaveField& psi, const PhysicalConstants& consts,
                            double v_cap) {
    return quotient_field(psi, consts, v_cap, Part::Imag);
}

VelocityField osmotic_velocity(const WaveField& psi, const PhysicalConstants& consts,
                               double v_cap) {
    return quotient_field(psi, consts, v_cap, Part::Real);
}

VelocityInterpolator::VelocityInterpolator(const WaveHistory& history, double v_cap)
    : v_cap_(v_cap) {
    if (history.snapshots.empty())
        throw std::invalid_argument("history has no snapshots");
    grid_ = history.snapshots.front().grid;
    consts_ = history.consts;
    t0_ = history.t0;
    t_final_ = history.t_final();
    dt_snap_ = history.dt_snapshot;
    current_.reserve(history.snapshots.size());
    osmotic_.reserve(history.snapshots.size());
    for (const auto& snap : history.snapshots) {
        current_.push_back(bohm_velocity(snap, history.consts, v_cap));
        osmotic_.push_back(osmotic_velocity(snap, history.consts, v_cap));
    }
}

void VelocityInterpolator::locate(double t, int& i, double& w) const {
    const double slack = 1e-9 * std::max(1.0, std::abs(t_final_));
    if (t < t0_ - slack || t > t_final_ + slack)
        throw std::out_of_range("t outside history span");
    if (current_.size() == 1 || dt_snap_ <= 0.0) {
        i = 0;
        w = 0.0;
        return;
    }
    double s = (t - t0_) / dt_snap_;
    i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, static_cast<int>(current_.size()) - 2);
    w = s - i;
    w = std::clamp(w, 0.0, 1.0);
    if (w < 1e-12) w = 0.0;  // exact snapshot hit
    if (w > 1.0 - 1e-12) {
        i += 1;
        w = 0.0;
        i = std::min(i, static_cast<int>(current_.size()) - 1);
    }
}

VelocityInterpolator::Sample VelocityInterpolator::eval_one(
    const std::vector<VelocityField>& fields, double x, double t) const {
    if (!grid_.contains(x)) throw std::out_of_range("x outside grid");
    int i;
    double w;
    locate(t, i, w);

    const int n = grid_.n_points;
    double s = (x - grid_.x_min) / grid_.dx;
    int i1 = static_cast<int>(std::floor(s));
    double f = s - i1;
    i1 %= n;
    const int i0 = (i1 + n - 1) % n;
    const int i2 = (i1 + 1) % n;
    const int i3 = (i1 + 2) % n;

    auto cell = [&](const VelocityField& vf, bool& rel) {
        const double p0 = vf.values[i0], p1 = vf.values[i1];
        const double p2 = vf.values[i2], p3 = vf.values[i3];
        rel = vf.reliable[i0] && vf.reliable[i1] && vf.reliable[i2] && vf.reliable[i3];
        const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        const double c = -0.5 * p0 + 0.5 * p2;
        return ((a * f + b) * f + c) * f + p1;
    };

    Sample out;
    bool rel_lo = true, rel_hi = true;
    if (w == 0.0) {
        out.value = cell(fields[i], rel_lo);
        out.reliable = rel_lo;
    } else {
        const double lo = cell(fields[i], rel_lo);
        const double hi = cell(fields[i + 1], rel_hi);
        out.value = (1.0 - w) * lo + w * hi;
        out.reliable = rel_lo && rel_hi;
    }
    out.value = std::clamp(out.value, -v_cap_, v_cap_);
    return out;
}

VelocityInterpolator::Sample VelocityInterpolator::eval(VelocityKind kind, double x,
                                                        double t) const {
    switch (kind) {
        case VelocityKind::Current:
            return eval_one(current_, x, t);
        case VelocityKind::Osmotic:
            return eval_one(osmotic_, x, t);
        case VelocityKind::Forward: {
            const auto v = eval_one(current_, x, t);
            const auto u = eval_one(osmotic_, x, t);
            return {std::clamp(v.value + u.value, -v_cap_, v_cap_),
                    v.reliable && u.reliable};
        }
        case VelocityKind::Backward: {
            const auto v = eval_one(current_, x, t);
            const auto u = eval_one(osmotic_, x, t);
            return {std::clamp(v.value - u.value, -v_cap_, v_cap_),
                    v.reliable && u.reliable};
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace qtraj
