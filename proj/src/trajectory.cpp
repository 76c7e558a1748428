#include "qtraj/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qtraj/random.hpp"

namespace qtraj {

namespace {
constexpr std::uint64_t kSamplerSalt = 1;
constexpr std::uint64_t kNoiseSalt = 2;
}  // namespace

double noise_scale(const PhysicalConstants& consts) {
    return std::sqrt(consts.hbar / consts.mass);
}

const char* noise_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Zero: return "zero";
        case NoiseKind::WhiteNoise: return "white";
        case NoiseKind::NelsonOsmotic: return "nelson";
    }
    return "?";
}

int EnsembleRecord::n_escaped() const {
    int c = 0;
    for (auto e : escaped) c += e ? 1 : 0;
    return c;
}

int EnsembleRecord::time_index(double t) const {
    for (int j = 0; j < n_times(); ++j)
        if (std::abs(times[j] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return j;
    throw std::out_of_range("t is not a recorded time");
}

namespace {

/// Trapezoid-integrated discrete CDF over the periodic grid with linear
/// interpolation inside each cell. The wrap cell closes the telescoping sum,
/// so the total equals the plain Riemann sum of the density.
class CdfSampler {
  public:
    explicit CdfSampler(const WaveField& psi0)
        : grid_(psi0.grid), rho_(density(psi0).values), cdf_(grid_.n_points + 1, 0.0) {
        const int np = grid_.n_points;
        for (int k = 0; k < np; ++k) {
            const double a = rho_[k];
            const double b = rho_[(k + 1) % np];
            cdf_[k + 1] = cdf_[k] + 0.5 * (a + b) * grid_.dx;
        }
        if (!(cdf_[np] > 0.0))
            throw std::domain_error("cannot sample the zero density");
    }

    double position(double u) const {
        const int np = grid_.n_points;
        const double target = u * cdf_[np];
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
        int k = static_cast<int>(it - cdf_.begin()) - 1;
        k = std::clamp(k, 0, np - 1);
        const double a = rho_[k];
        const double b = rho_[(k + 1) % np];
        const double slope = b - a;
        const double frac = (target - cdf_[k]) / grid_.dx;  // in-cell mass
        double s;
        if (std::abs(slope) < 1e-14 * std::max(a, b)) {
            s = (a > 0.0) ? frac / a : 0.0;
        } else {
            const double disc = a * a + 2.0 * slope * frac;
            s = (-a + std::sqrt(std::max(disc, 0.0))) / slope;
        }
        s = std::clamp(s, 0.0, 1.0 - 1e-12);
        if (s == 0.0 && a == 0.0) s = 1e-12;  // never land on a node
        return grid_.x(k) + s * grid_.dx;
    }

  private:
    SpatialGrid grid_;
    std::vector<double> rho_;
    std::vector<double> cdf_;
};

}  // namespace

double inverse_cdf_position(const WaveField& psi0, double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("u must be in (0,1)");
    return CdfSampler(psi0).position(u);
}

std::vector<double> sample_initial_positions(const WaveField& psi0, int n,
                                             std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    const CdfSampler sampler(psi0);
    RandomStream rng(seed, kSamplerSalt);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = sampler.position(rng.uniform_open());
    return out;
}

namespace {

struct Recorder {
    Trajectory* traj;
    int record_every;
    void record(int step, double t, double x, double z) const {
        if (step % record_every == 0) {
            traj->times.push_back(t);
            traj->positions.push_back(x);
            traj->zeta.push_back(z);
        }
    }
};

long step_count(const VelocityInterpolator& field, double dt_sub, int record_every) {
    if (!(dt_sub > 0.0)) throw std::invalid_argument("dt_sub must be > 0");
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    const double span = field.t_final() - field.t0();
    const long n = std::llround(span / dt_sub);
    if (std::abs(n * dt_sub - span) > 1e-9 * std::max(1.0, std::abs(span)))
        throw std::invalid_argument("history span is not an integer number of sub-steps");
    if (n % record_every != 0)
        throw std::invalid_argument("sub-step count not divisible by record_every");
    return n;
}

void freeze_rest(Trajectory& traj, const Recorder& rec, long from_step, long n_steps,
                 double t0, double h, double x, double z) {
    traj.escaped = true;
    for (long s = from_step; s <= n_steps; ++s)
        rec.record(static_cast<int>(s), t0 + s * h, x, z);
}

}  // namespace

Trajectory integrate_bohmian(const VelocityInterpolator& field, double r0,
                             double dt_sub, int record_every) {
    const long n_steps = step_count(field, dt_sub, record_every);
    if (!field.grid().contains(r0)) throw std::out_of_range("r0 outside the domain");

    Trajectory traj;
    traj.r0 = r0;
    traj.noise = NoiseKind::Zero;
    const Recorder rec{&traj, record_every};
    const double t0 = field.t0(), h = dt_sub;

    double x = r0;
    rec.record(0, t0, x, 0.0);
    for (long s = 0; s < n_steps; ++s) {
        const double t = t0 + s * h;
        auto v = [&](double xx, double tt) {
            return field.eval(VelocityKind::Current, xx, tt).value;
        };
        const double k1 = v(x, t);
        const double x2 = x + 0.5 * h * k1;
        if (!field.grid().contains(x2)) { freeze_rest(traj, rec, s + 1, n_steps, t0, h, x, 0.0); return traj; }
        const double k2 = v(x2, t + 0.5 * h);
        const double x3 = x + 0.5 * h * k2;
        if (!field.grid().contains(x3)) { freeze_rest(traj, rec, s + 1, n_steps, t0, h, x, 0.0); return traj; }
        const double k3 = v(x3, t + 0.5 * h);
        const double x4 = x + h * k3;
        if (!field.grid().contains(x4)) { freeze_rest(traj, rec, s + 1, n_steps, t0, h, x, 0.0); return traj; }
        const double k4 = v(x4, t + h);
        const double xn = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!field.grid().contains(xn)) { freeze_rest(traj, rec, s + 1, n_steps, t0, h, x, 0.0); return traj; }
        x = xn;
        rec.record(static_cast<int>(s + 1), t0 + (s + 1) * h, x, 0.0);
    }
    return traj;
}

Trajectory integrate_bohmian(const WaveHistory& history, double r0, double dt_sub,
                             int record_every) {
    const double cap = history.snapshots.front().grid.dx / dt_sub;
    VelocityInterpolator field(history, cap);
    return integrate_bohmian(field, r0, dt_sub, record_every);
}

Trajectory integrate_stochastic(const VelocityInterpolator& field, double r0,
                                NoiseKind noise, double dt_sub, std::uint64_t seed,
                                int record_every) {
    const long n_steps = step_count(field, dt_sub, record_every);
    if (!field.grid().contains(r0)) throw std::out_of_range("r0 outside the domain");

    Trajectory traj;
    traj.r0 = r0;
    traj.noise = noise;
    traj.rng_seed = seed;
    const Recorder rec{&traj, record_every};
    const double t0 = field.t0(), h = dt_sub;
    const double cap = field.v_cap();
    const double kick = (noise == NoiseKind::Zero)
                            ? 0.0
                            : noise_scale(field.consts()) * std::sqrt(h);
    RandomStream rng(seed, kNoiseSalt);

    // drift b and the current velocity v at one space-time point; for the
    // Nelson model b = v + u capped as a whole, otherwise b is v itself.
    auto drift = [&](double xx, double tt, double& b, double& v) {
        v = field.eval(VelocityKind::Current, xx, tt).value;
        if (noise == NoiseKind::NelsonOsmotic) {
            const double u = field.eval(VelocityKind::Osmotic, xx, tt).value;
            b = std::clamp(v + u, -cap, cap);
        } else {
            b = v;
        }
    };

    double x = r0, z = 0.0;
    rec.record(0, t0, x, z);
    for (long s = 0; s < n_steps; ++s) {
        const double t = t0 + s * h;
        const double xi = (noise == NoiseKind::Zero) ? 0.0 : kick * rng.normal();
        double b1, v1, b2, v2;
        drift(x, t, b1, v1);
        const double xpred = x + b1 * h + xi;
        if (!field.grid().contains(xpred)) { freeze_rest(traj, rec, s + 1, n_steps, t0, h, x, z); return traj; }
        drift(xpred, t + h, b2, v2);
        const double xn = x + 0.5 * h * (b1 + b2) + xi;
        if (!field.grid().contains(xn)) { freeze_rest(traj, rec, s + 1, n_steps, t0, h, x, z); return traj; }
        // Fluctuation record: realized increment minus the current-velocity
        // quadrature over the same evaluation points. The drift terms cancel
        // exactly for the Zero and WhiteNoise models.
        z += xi + 0.5 * h * ((b1 - v1) + (b2 - v2));
        x = xn;
        rec.record(static_cast<int>(s + 1), t0 + (s + 1) * h, x, z);
    }
    return traj;
}

Trajectory integrate_stochastic(const WaveHistory& history, double r0,
                                NoiseKind noise, double dt_sub, std::uint64_t seed,
                                int record_every) {
    const double cap = history.snapshots.front().grid.dx / dt_sub;
    VelocityInterpolator field(history, cap);
    return integrate_stochastic(field, r0, noise, dt_sub, seed, record_every);
}

EnsembleRecord run_ensemble(const WaveHistory& history, const EnsembleSpec& spec,
                            int workers) {
    if (spec.n_trajectories < 0) throw std::invalid_argument("n_trajectories < 0");
    const double cap = history.snapshots.front().grid.dx / spec.dt_sub;
    VelocityInterpolator field(history, cap);
    const long n_steps = step_count(field, spec.dt_sub, spec.record_every);
    const int n_times = static_cast<int>(n_steps / spec.record_every) + 1;
    const int n = spec.n_trajectories;

    EnsembleRecord rec;
    rec.noise = spec.noise;
    rec.base_seed = spec.base_seed;
    rec.r0 = sample_initial_positions(history.snapshots.front(), n, spec.base_seed);
    rec.escaped.assign(n, 0);
    rec.positions.assign(n_times, std::vector<double>(n, 0.0));
    rec.zeta.assign(n_times, std::vector<double>(n, 0.0));
    rec.times.resize(n_times);
    for (int j = 0; j < n_times; ++j)
        rec.times[j] = field.t0() + (j * static_cast<long>(spec.record_every)) * spec.dt_sub;

    auto integrate_range = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            Trajectory traj =
                (spec.noise == NoiseKind::Zero)
                    ? integrate_bohmian(field, rec.r0[i], spec.dt_sub, spec.record_every)
                    : integrate_stochastic(field, rec.r0[i], spec.noise, spec.dt_sub,
                                           spec.base_seed + static_cast<std::uint64_t>(i),
                                           spec.record_every);
            rec.escaped[i] = traj.escaped ? 1 : 0;
            for (int j = 0; j < n_times; ++j) {
                rec.positions[j][i] = traj.positions[j];
                rec.zeta[j][i] = traj.zeta[j];
            }
        }
    };

    workers = std::clamp(workers, 1, std::max(1, n));
    if (workers == 1 || n == 0) {
        integrate_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int lo = w * chunk;
            const int hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(integrate_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    const int esc = rec.n_escaped();
    if (n > 0 && esc > spec.max_escape_fraction * n)
        throw EscapeRateError("escape rate " + std::to_string(esc) + "/" +
                              std::to_string(n) +
                              " exceeds the allowed fraction; enlarge the domain");
    return rec;
}

GResult compute_G(const EnsembleRecord& record, const WaveHistory& history,
                  double t) {
    const int snap = history.snapshot_index(t);
    return compute_G(record, density(history.at(0)), density(history.at(snap)), t);
}

GResult compute_G(const EnsembleRecord& record, const DensityField& rho_0,
                  const DensityField& rho_t, double t) {
    const int jt = record.time_index(t);
    const double rho0_max =
        *std::max_element(rho_0.values.begin(), rho_0.values.end());
    const double floor = kNodeEps * rho0_max;

    GResult res;
    res.values.reserve(record.r0.size());
    for (int i = 0; i < record.n_trajectories(); ++i) {
        if (record.escaped[i]) continue;
        const double r0 = record.r0[i];
        const double d0 = interpolate_periodic(rho_0.grid, rho_0.values, r0);
        if (!(d0 >= floor)) {
            ++res.n_skipped;
            continue;
        }
        const double dt_ =
            std::max(interpolate_periodic(rho_t.grid, rho_t.values, r0), 0.0);
        res.values.push_back(record.positions[jt][i] - r0 * (dt_ / d0));
    }
    res.n_used = static_cast<int>(res.values.size());
    if (res.n_used > 0) {
        double sum = 0.0;
        for (double g : res.values) sum += g;
        res.mean = sum / res.n_used;
        double ss = 0.0;
        for (double g : res.values) ss += (g - res.mean) * (g - res.mean);
        const double var = (res.n_used > 1) ? ss / (res.n_used - 1) : 0.0;
        res.std_error = std::sqrt(var / res.n_used);
    }
    return res;
}

}  // namespace qtraj
