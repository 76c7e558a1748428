#include "qtraj/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qtraj/random.hpp"
#include "qtraj/states.hpp"

namespace qtraj {

DensitySeries DensitySeries::from_history(const WaveHistory& history) {
    DensitySeries s;
    s.times.reserve(history.size());
    s.fields.reserve(history.size());
    for (const auto& snap : history.snapshots) {
        s.times.push_back(snap.time);
        s.fields.push_back(density(snap));
    }
    return s;
}

const DensityField& DensitySeries::at_time(double t) const {
    for (size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t)))
            return fields[i];
    throw std::out_of_range("no density snapshot at requested time");
}

double DensitySeries::mean_position(double t) const {
    return expectation_position(at_time(t));
}

DensityField histogram_density(const std::vector<double>& positions,
                               const SpatialGrid& grid, int n_bins) {
    if (positions.empty()) throw std::invalid_argument("empty position list");
    if (n_bins < 1 || grid.n_points % n_bins != 0)
        throw std::invalid_argument("n_bins must divide n_points");
    DensityField h;
    h.grid = build_grid(grid.x_min, grid.x_max, n_bins);
    h.values.assign(n_bins, 0.0);
    const double width = h.grid.dx;
    for (double x : positions) {
        const int b = h.grid.cell_index(x);
        h.values[b] += 1.0;
    }
    const double scale = 1.0 / (positions.size() * width);
    for (auto& v : h.values) v *= scale;
    return h;
}

DensityField coarsen_density(const DensityField& rho, int n_bins) {
    if (n_bins < 1 || rho.grid.n_points % n_bins != 0)
        throw std::invalid_argument("n_bins must divide n_points");
    const int stride = rho.grid.n_points / n_bins;
    DensityField out;
    out.grid = build_grid(rho.grid.x_min, rho.grid.x_max, n_bins);
    out.time = rho.time;
    out.values.assign(n_bins, 0.0);
    for (int b = 0; b < n_bins; ++b) {
        double s = 0.0;
        for (int k = 0; k < stride; ++k) s += rho.values[b * stride + k];
        out.values[b] = s / stride;
    }
    return out;
}

double total_variation(const DensityField& rho1, const DensityField& rho2) {
    if (!(rho1.grid == rho2.grid))
        throw std::invalid_argument("total_variation: grid mismatch");
    double s = 0.0;
    for (size_t k = 0; k < rho1.values.size(); ++k)
        s += std::abs(rho1.values[k] - rho2.values[k]);
    return 0.5 * s * rho1.grid.dx;
}

bool ConsistencyReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

namespace {

struct MeanStd {
    double mean = 0.0;
    double sd = 0.0;
    long n = 0;
};

MeanStd mean_std(const std::vector<double>& v) {
    MeanStd m;
    m.n = static_cast<long>(v.size());
    if (m.n == 0) return m;
    double s = 0.0;
    for (double x : v) s += x;
    m.mean = s / m.n;
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = (m.n > 1) ? std::sqrt(ss / (m.n - 1)) : 0.0;
    return m;
}

std::vector<double> surviving_column(const EnsembleRecord& rec, int jt) {
    std::vector<double> out;
    out.reserve(rec.r0.size());
    for (int i = 0; i < rec.n_trajectories(); ++i)
        if (!rec.escaped[i]) out.push_back(rec.positions[jt][i]);
    return out;
}

}  // namespace

void check_mean_consistency(ConsistencyReport& report, const EnsembleRecord& record,
                            const DensitySeries& series,
                            const std::vector<double>& times) {
    if (record.n_survivors() < 1000)
        throw std::invalid_argument("mean consistency needs >= 1000 survivors");
    for (double t : times) {
        const int jt = record.time_index(t);
        const auto col = surviving_column(record, jt);
        const auto ms = mean_std(col);
        const double expected = series.mean_position(t);
        CheckEntry e;
        e.name = "mean_consistency";
        e.time = t;
        e.n = ms.n;
        e.statistic = ms.mean - expected;
        e.std_error = ms.sd / std::sqrt(static_cast<double>(ms.n));
        e.threshold = 4.0 * e.std_error;
        e.pass = std::abs(e.statistic) <= e.threshold;
        report.entries.push_back(e);
    }
}

void zeta_mean_check(ConsistencyReport& report, const EnsembleRecord& record,
                     const std::vector<double>& times) {
    if (record.noise == NoiseKind::Zero)
        throw std::invalid_argument(
            "zeta mean check rejects Zero-noise ensembles: zeta is identically 0");
    for (double t : times) {
        const int jt = record.time_index(t);
        if (jt == 0) continue;  // no increment before the first record
        std::vector<double> inc;
        inc.reserve(record.r0.size());
        for (int i = 0; i < record.n_trajectories(); ++i)
            if (!record.escaped[i])
                inc.push_back(record.zeta[jt][i] - record.zeta[jt - 1][i]);
        const auto ms = mean_std(inc);
        CheckEntry e;
        e.name = "zeta_mean";
        e.time = t;
        e.n = ms.n;
        e.statistic = ms.mean;
        e.std_error = ms.sd / std::sqrt(static_cast<double>(std::max(ms.n, 1L)));
        e.threshold = 4.0 * e.std_error;
        e.pass = std::abs(e.statistic) <= e.threshold;
        report.entries.push_back(e);
    }
}

void equivariance_check(ConsistencyReport& report, const EnsembleRecord& record,
                        const DensitySeries& series, const std::vector<double>& times,
                        int n_bins, double tv_threshold) {
    for (double t : times) {
        const int jt = record.time_index(t);
        const auto col = surviving_column(record, jt);
        const auto& rho = series.at_time(t);
        const auto hist = histogram_density(col, rho.grid, n_bins);
        const auto coarse = coarsen_density(rho, n_bins);
        CheckEntry e;
        e.name = "equivariance";
        e.time = t;
        e.n = static_cast<long>(col.size());
        e.statistic = total_variation(hist, coarse);
        e.std_error = 0.0;
        e.threshold = tv_threshold;
        e.pass = e.statistic < e.threshold;
        report.entries.push_back(e);
    }
}

void g_constraint_check(ConsistencyReport& report, const EnsembleRecord& record,
                        const DensitySeries& series,
                        const std::vector<double>& times) {
    const auto& rho0 = series.fields.front();
    for (double t : times) {
        const auto g = compute_G(record, rho0, series.at_time(t), t);
        CheckEntry e;
        e.name = "g_constraint";
        e.time = t;
        e.n = g.n_used;
        e.statistic = g.mean;
        e.std_error = g.std_error;
        e.threshold = 4.0 * g.std_error;
        e.pass = std::abs(e.statistic) <= e.threshold;
        report.entries.push_back(e);
    }
}

namespace {

using Kernel = std::vector<std::vector<double>>;

int ck_bin(double x, double x_lo, double w, int n_bins) {
    const int b = static_cast<int>(std::floor((x - x_lo) / w));
    return std::clamp(b, 0, n_bins - 1);
}

Kernel row_normalize(const std::vector<std::vector<long>>& counts) {
    const int n = static_cast<int>(counts.size());
    Kernel p(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        long row = 0;
        for (long c : counts[i]) row += c;
        if (row == 0) continue;
        for (int j = 0; j < n; ++j)
            p[i][j] = static_cast<double>(counts[i][j]) / row;
    }
    return p;
}

double ck_residual_from(const std::vector<int>& b0, const std::vector<int>& b1,
                        const std::vector<int>& b2, int n_bins,
                        const std::vector<long>& occ0, long min_count) {
    std::vector<std::vector<long>> c01(n_bins, std::vector<long>(n_bins, 0));
    std::vector<std::vector<long>> c12(n_bins, std::vector<long>(n_bins, 0));
    std::vector<std::vector<long>> c02(n_bins, std::vector<long>(n_bins, 0));
    for (size_t i = 0; i < b0.size(); ++i) {
        ++c01[b0[i]][b1[i]];
        ++c12[b1[i]][b2[i]];
        ++c02[b0[i]][b2[i]];
    }
    const auto p01 = row_normalize(c01);
    const auto p12 = row_normalize(c12);
    const auto p02 = row_normalize(c02);

    double worst = 0.0;
    for (int i = 0; i < n_bins; ++i) {
        if (occ0[i] < min_count) continue;
        double dist = 0.0;
        for (int k2 = 0; k2 < n_bins; ++k2) {
            double comp = 0.0;
            for (int j = 0; j < n_bins; ++j) comp += p01[i][j] * p12[j][k2];
            dist += std::abs(p02[i][k2] - comp);
        }
        worst = std::max(worst, 0.5 * dist);
    }
    return worst;
}

}  // namespace

CkResult chapman_kolmogorov_residual(const EnsembleRecord& record, double t0,
                                     double t1, double t2, int n_bins, double x_lo,
                                     double x_hi, int n_bootstrap,
                                     std::uint64_t bootstrap_seed) {
    if (!(t0 < t1 && t1 < t2))
        throw std::invalid_argument("need t0 < t1 < t2");
    if (n_bins < 2 || !(x_hi > x_lo))
        throw std::invalid_argument("bad binning for the CK residual");
    const int j0 = record.time_index(t0);
    const int j1 = record.time_index(t1);
    const int j2 = record.time_index(t2);
    const double w = (x_hi - x_lo) / n_bins;

    std::vector<int> b0, b1, b2;
    for (int i = 0; i < record.n_trajectories(); ++i) {
        if (record.escaped[i]) continue;
        b0.push_back(ck_bin(record.positions[j0][i], x_lo, w, n_bins));
        b1.push_back(ck_bin(record.positions[j1][i], x_lo, w, n_bins));
        b2.push_back(ck_bin(record.positions[j2][i], x_lo, w, n_bins));
    }
    if (b0.empty()) throw std::invalid_argument("no surviving trajectories");

    constexpr long kMinCount = 50;
    std::vector<long> occ0(n_bins, 0), occ1(n_bins, 0);
    for (int b : b0) ++occ0[b];
    for (int b : b1) ++occ1[b];
    for (int i = 0; i < n_bins; ++i) {
        if ((occ0[i] > 0 && occ0[i] < kMinCount) ||
            (occ1[i] > 0 && occ1[i] < kMinCount))
            throw std::invalid_argument(
                "undersampled bins: coarsen or narrow the CK binning");
    }

    CkResult res;
    res.residual = ck_residual_from(b0, b1, b2, n_bins, occ0, kMinCount);
    for (int i = 0; i < n_bins; ++i) res.n_rows += (occ0[i] >= kMinCount) ? 1 : 0;

    // Parametric bootstrap of the Markov null: redraw each trajectory's t2
    // bin from the estimated t1 -> t2 kernel, conditionally independent of
    // its t0 bin.
    std::vector<std::vector<long>> c12(n_bins, std::vector<long>(n_bins, 0));
    for (size_t i = 0; i < b1.size(); ++i) ++c12[b1[i]][b2[i]];
    const auto p12 = row_normalize(c12);
    std::vector<std::vector<double>> cdf12(n_bins, std::vector<double>(n_bins, 0.0));
    for (int i = 0; i < n_bins; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n_bins; ++j) {
            acc += p12[i][j];
            cdf12[i][j] = acc;
        }
    }

    std::vector<double> floors(n_bootstrap, 0.0);
    std::vector<int> b2_star(b2.size());
    for (int rep = 0; rep < n_bootstrap; ++rep) {
        RandomStream rng(bootstrap_seed, static_cast<std::uint64_t>(rep) + 1);
        for (size_t i = 0; i < b1.size(); ++i) {
            const double u = rng.uniform();
            const auto& row = cdf12[b1[i]];
            b2_star[i] = static_cast<int>(
                std::lower_bound(row.begin(), row.end(), u) - row.begin());
            b2_star[i] = std::min(b2_star[i], n_bins - 1);
        }
        floors[rep] = ck_residual_from(b0, b1, b2_star, n_bins, occ0, kMinCount);
    }
    std::sort(floors.begin(), floors.end());
    const int q = std::clamp(static_cast<int>(std::ceil(0.99 * n_bootstrap)) - 1, 0,
                             n_bootstrap - 1);
    res.noise_floor = floors[q];
    res.pass = res.residual <= res.noise_floor;
    return res;
}

double markov_obstruction_demo(const SpatialGrid& grid, const Potential& pot,
                               const PhysicalConstants& consts, double k0, double t,
                               double dt, double sigma0) {
    WaveField psi_a = make_gaussian(grid, 0.0, 0.0, sigma0);
    WaveField psi_b = psi_a;
    for (int k = 0; k < grid.n_points; ++k)
        psi_b.amp[k] *= std::exp(std::complex<double>(0.0, k0 * grid.x(k)));

    if (t == 0.0) return total_variation(density(psi_a), density(psi_b));
    const int steps_per_snap =
        static_cast<int>(std::max<long long>(1, std::llround(t / dt)));
    const auto ha = propagate(psi_a, pot, consts, t, dt, steps_per_snap);
    const auto hb = propagate(psi_b, pot, consts, t, dt, steps_per_snap);
    return total_variation(density(ha.snapshots.back()), density(hb.snapshots.back()));
}

std::string report_to_text(const ConsistencyReport& report) {
    std::string out = "# consistency report\n";
    char buf[256];
    for (const auto& e : report.entries) {
        std::snprintf(buf, sizeof(buf),
                      "check=%s time=%.17g n=%ld statistic=%.17g std_error=%.17g "
                      "threshold=%.17g pass=%d\n",
                      e.name.c_str(), e.time, e.n, e.statistic, e.std_error,
                      e.threshold, e.pass ? 1 : 0);
        out += buf;
    }
    out += report.all_pass() ? "all_pass=1\n" : "all_pass=0\n";
    return out;
}

}  // namespace qtraj
