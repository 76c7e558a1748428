#include "qtraj/classical.hpp"

#include <cmath>
#include <stdexcept>

#include "qtraj/potential.hpp"
#include "qtraj/propagator.hpp"
#include "qtraj/states.hpp"

namespace qtraj {

namespace {

constexpr double kCausticFloor = 0.05;

struct HarmonicCoeffs {
    double f, fdot, g;
};

HarmonicCoeffs harmonic_coeffs(const HarmonicScenario& h, double mass, double t) {
    const double c = std::cos(h.omega * t), s = std::sin(h.omega * t);
    HarmonicCoeffs out;
    out.f = c + (h.a0 / h.omega) * s;
    out.fdot = -h.omega * s + h.a0 * c;
    out.g = (h.b0 / (mass * h.omega)) * s;
    return out;
}

void check_caustic(double f) {
    if (std::abs(f) < kCausticFloor)
        throw std::domain_error("evaluation too close to a caustic of the flow");
}

}  // namespace

double classical_action(const ClassicalScenario& sc, double q, double t) {
    if (const auto* fr = std::get_if<FreeParticleScenario>(&sc.kind))
        return fr->p0 * q - 0.5 * fr->p0 * fr->p0 * t / sc.mass;
    const auto& h = std::get<HarmonicScenario>(sc.kind);
    const auto co = harmonic_coeffs(h, sc.mass, t);
    check_caustic(co.f);
    const double a = co.fdot / co.f;
    const double b = h.b0 / co.f;
    const double c = -(h.b0 * h.b0 / (2.0 * sc.mass * h.omega)) *
                     std::sin(h.omega * t) / co.f;
    return 0.5 * sc.mass * a * q * q + b * q + c;
}

double classical_velocity(const ClassicalScenario& sc, double q, double t) {
    if (const auto* fr = std::get_if<FreeParticleScenario>(&sc.kind))
        return fr->p0 / sc.mass;
    const auto& h = std::get<HarmonicScenario>(sc.kind);
    const auto co = harmonic_coeffs(h, sc.mass, t);
    check_caustic(co.f);
    return (co.fdot / co.f) * q + h.b0 / (sc.mass * co.f);
}

double classical_flow(const ClassicalScenario& sc, double q0, double t) {
    if (const auto* fr = std::get_if<FreeParticleScenario>(&sc.kind))
        return q0 + (fr->p0 / sc.mass) * t;
    const auto& h = std::get<HarmonicScenario>(sc.kind);
    const auto co = harmonic_coeffs(h, sc.mass, t);
    return q0 * co.f + co.g;
}

double classical_flow_jacobian(const ClassicalScenario& sc, double t) {
    if (std::holds_alternative<FreeParticleScenario>(sc.kind)) return 1.0;
    const auto& h = std::get<HarmonicScenario>(sc.kind);
    return harmonic_coeffs(h, sc.mass, t).f;
}

Trajectory integrate_classical(const ClassicalScenario& sc, double q0,
                               double t_final, double dt) {
    if (t_final < 0.0) throw std::invalid_argument("t_final must be >= 0");
    Trajectory traj;
    traj.r0 = q0;
    traj.noise = NoiseKind::Zero;
    traj.times.push_back(0.0);
    traj.positions.push_back(q0);
    traj.zeta.push_back(0.0);
    if (t_final == 0.0) return traj;
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");

    const long n = std::llround(t_final / dt);
    if (std::abs(n * dt - t_final) > 1e-9 * std::max(1.0, t_final))
        throw std::invalid_argument("t_final is not an integer number of steps");
    double q = q0;
    for (long s = 0; s < n; ++s) {
        const double t = s * dt;
        const double k1 = classical_velocity(sc, q, t);
        const double k2 = classical_velocity(sc, q + 0.5 * dt * k1, t + 0.5 * dt);
        const double k3 = classical_velocity(sc, q + 0.5 * dt * k2, t + 0.5 * dt);
        const double k4 = classical_velocity(sc, q + dt * k3, t + dt);
        q += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.times.push_back((s + 1) * dt);
        traj.positions.push_back(q);
        traj.zeta.push_back(0.0);
    }
    return traj;
}

DensityField transport_density(const ClassicalScenario& sc,
                               const DensityField& rho0, double t) {
    const double f = classical_flow_jacobian(sc, t);
    check_caustic(f);
    const double g = classical_flow(sc, 0.0, t);
    DensityField out;
    out.grid = rho0.grid;
    out.time = rho0.time + t;
    out.values.resize(rho0.values.size());
    for (int k = 0; k < rho0.grid.n_points; ++k) {
        const double pre = (rho0.grid.x(k) - g) / f;
        out.values[k] = rho0.grid.contains(pre)
                            ? std::max(interpolate_periodic(rho0.grid, rho0.values, pre), 0.0) /
                                  std::abs(f)
                            : 0.0;
    }
    return out;
}

double max_hj_residual(const ClassicalScenario& sc, double q_lo, double q_hi,
                       double t_lo, double t_hi, int nq, int nt) {
    const double hq = 2e-3, ht = 2e-3;
    auto d4 = [](double fm2, double fm1, double fp1, double fp2, double h) {
        return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    };
    double vmax = 0.0;
    for (int it = 0; it < nt; ++it) {
        const double t = t_lo + (t_hi - t_lo) * it / std::max(1, nt - 1);
        for (int iq = 0; iq < nq; ++iq) {
            const double q = q_lo + (q_hi - q_lo) * iq / std::max(1, nq - 1);
            const double st = d4(classical_action(sc, q, t - 2 * ht),
                                 classical_action(sc, q, t - ht),
                                 classical_action(sc, q, t + ht),
                                 classical_action(sc, q, t + 2 * ht), ht);
            const double sq = d4(classical_action(sc, q - 2 * hq, t),
                                 classical_action(sc, q - hq, t),
                                 classical_action(sc, q + hq, t),
                                 classical_action(sc, q + 2 * hq, t), hq);
            double pot = 0.0;
            if (const auto* h = std::get_if<HarmonicScenario>(&sc.kind))
                pot = 0.5 * sc.mass * h->omega * h->omega * q * q;
            const double res = std::abs(st + sq * sq / (2.0 * sc.mass) + pot);
            vmax = std::max(vmax, res);
        }
    }
    return vmax;
}

double matched_classical_trajectory(const HbarScalingParams& p, double r0, double t) {
    if (p.scenario == ScalingScenario::FreeGaussian) return r0;
    return r0 + p.x_c * (std::cos(p.omega * t) - 1.0);
}

HbarScalingReport hbar_scaling_study(const HbarScalingParams& p) {
    if (p.hbar_list.empty()) throw std::invalid_argument("empty hbar list");
    for (size_t i = 1; i < p.hbar_list.size(); ++i)
        if (!(p.hbar_list[i] < p.hbar_list[i - 1]))
            throw std::invalid_argument("hbar list must be strictly decreasing");

    HbarScalingReport report;
    report.hbars = p.hbar_list;
    for (const double hbar : p.hbar_list) {
        const PhysicalConstants consts{hbar, p.mass};
        WaveField psi0;
        Potential pot;
        if (p.scenario == ScalingScenario::FreeGaussian) {
            psi0 = make_gaussian(p.grid, 0.0, 0.0, p.sigma0);
            pot = Free{};
        } else {
            psi0 = normalize(analytic_coherent_state(p.grid, p.x_c, p.omega, consts, 0.0));
            pot = Harmonic{p.omega};
        }
        const auto hist =
            propagate(psi0, pot, consts, p.t_final, p.dt, p.snapshot_every);

        EnsembleSpec spec;
        spec.n_trajectories = p.n_trajectories;
        spec.base_seed = p.base_seed;
        spec.noise = p.noise;
        spec.dt_sub = p.dt_sub;
        spec.record_every = p.record_every;
        const auto rec = run_ensemble(hist, spec, p.workers);

        double sum = 0.0;
        int used = 0;
        for (int i = 0; i < rec.n_trajectories(); ++i) {
            if (rec.escaped[i]) continue;
            double dev = 0.0;
            for (int j = 0; j < rec.n_times(); ++j) {
                const double ref = matched_classical_trajectory(p, rec.r0[i], rec.times[j]);
                dev = std::max(dev, std::abs(rec.positions[j][i] - ref));
            }
            sum += dev;
            ++used;
        }
        report.mean_sup_deviation.push_back(used > 0 ? sum / used : 0.0);
    }

    // least-squares slope of log D against log hbar
    const int m = static_cast<int>(report.hbars.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        const double lx = std::log(report.hbars[i]);
        const double ly = std::log(std::max(report.mean_sup_deviation[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = m * sxx - sx * sx;
    report.slope = (denom != 0.0) ? (m * sxy - sx * sy) / denom : 0.0;
    return report;
}

}  // namespace qtraj
