#include "qtraj/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qtraj/propagator.hpp"
#include "qtraj/states.hpp"

namespace qtraj {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string density_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "density_%04d.csv", index);
    return buf;
}

ScenarioConfig apply_overrides(ScenarioConfig cfg, const RunOptions& opts) {
    if (opts.n_trajectories) cfg.n_trajectories = *opts.n_trajectories;
    if (opts.seed) cfg.base_seed = *opts.seed;
    if (opts.noise) cfg.noise = *opts.noise;
    if (opts.output_dir) cfg.output_dir = *opts.output_dir;
    return cfg;
}

ConsistencyReport run_checks(const ScenarioConfig& cfg, const EnsembleRecord& rec,
                             const DensitySeries& series) {
    ConsistencyReport report;
    for (const auto check : cfg.checks) {
        switch (check) {
            case CheckKind::MeanConsistency:
                check_mean_consistency(report, rec, series, cfg.check_times);
                break;
            case CheckKind::Equivariance:
                equivariance_check(report, rec, series, cfg.check_times, cfg.n_bins,
                                   cfg.tv_threshold);
                break;
            case CheckKind::ZetaMean:
                zeta_mean_check(report, rec, cfg.check_times);
                break;
            case CheckKind::GConstraint:
                g_constraint_check(report, rec, series, cfg.check_times);
                break;
            case CheckKind::ChapmanKolmogorov: {
                double lo = cfg.ck_lo, hi = cfg.ck_hi;
                if (lo == hi) {
                    // derive a core range from the middle-time sample
                    const int j1 = rec.time_index(cfg.ck_times[1]);
                    double sum = 0.0, ss = 0.0;
                    long m = 0;
                    for (int i = 0; i < rec.n_trajectories(); ++i) {
                        if (rec.escaped[i]) continue;
                        sum += rec.positions[j1][i];
                        ++m;
                    }
                    const double mean = sum / std::max(m, 1L);
                    for (int i = 0; i < rec.n_trajectories(); ++i) {
                        if (rec.escaped[i]) continue;
                        const double d = rec.positions[j1][i] - mean;
                        ss += d * d;
                    }
                    const double sd = std::sqrt(ss / std::max(m - 1, 1L));
                    lo = mean - 3.0 * sd;
                    hi = mean + 3.0 * sd;
                }
                const auto ck = chapman_kolmogorov_residual(
                    rec, cfg.ck_times[0], cfg.ck_times[1], cfg.ck_times[2],
                    cfg.ck_bins, lo, hi, cfg.bootstrap);
                CheckEntry e;
                e.name = "chapman_kolmogorov";
                e.time = cfg.ck_times[2];
                e.n = ck.n_rows;
                e.statistic = ck.residual;
                e.std_error = 0.0;
                e.threshold = ck.noise_floor;
                e.pass = ck.pass;
                report.entries.push_back(e);
                break;
            }
        }
    }
    return report;
}

std::string manifest_text(const ScenarioConfig& cfg, int n_snapshots,
                          const EnsembleRecord& rec, int exit_code) {
    std::string out;
    out += "format_version = 1\n";
    out += "scenario = " + std::string(scenario_name(cfg.scenario)) + "\n";
    out += "base_seed = " + std::to_string(cfg.base_seed) + "\n";
    out += "noise = " + std::string(noise_name(cfg.noise)) + "\n";
    out += "n_trajectories = " + std::to_string(cfg.n_trajectories) + "\n";
    out += "n_escaped = " + std::to_string(rec.n_escaped()) + "\n";
    out += "n_survivors = " + std::to_string(rec.n_survivors()) + "\n";
    out += "n_snapshots = " + std::to_string(n_snapshots) + "\n";
    out += "n_record_times = " + std::to_string(rec.n_times()) + "\n";
    out += "checks_requested = " + std::to_string(cfg.checks.size()) + "\n";
    out += "exit_status = " + std::to_string(exit_code) + "\n";
    return out;
}

}  // namespace

Potential scenario_potential(const ScenarioConfig& cfg) {
    switch (cfg.scenario) {
        case ScenarioKind::FreeGaussian:
        case ScenarioKind::TwoGaussianSuperposition:
            return Free{};
        case ScenarioKind::HarmonicCoherent:
            return Harmonic{cfg.omega};
        case ScenarioKind::GaussianBarrier:
            return GaussianBarrier{cfg.barrier_height, cfg.barrier_width,
                                   cfg.barrier_center};
    }
    throw std::logic_error("unreachable");
}

WaveField scenario_initial_state(const ScenarioConfig& cfg) {
    const auto grid = build_grid(cfg.x_min, cfg.x_max, cfg.n_points);
    switch (cfg.scenario) {
        case ScenarioKind::FreeGaussian:
        case ScenarioKind::GaussianBarrier:
            return make_gaussian(grid, cfg.center, cfg.k0, cfg.sigma0);
        case ScenarioKind::HarmonicCoherent:
            return normalize(
                analytic_coherent_state(grid, cfg.center, cfg.omega,
                                        cfg.constants(), 0.0));
        case ScenarioKind::TwoGaussianSuperposition:
            return make_two_gaussian(grid, cfg.center, cfg.separation, cfg.k0,
                                     cfg.sigma0);
    }
    throw std::logic_error("unreachable");
}

RunResult run_scenario(const ScenarioConfig& raw_cfg, const RunOptions& opts) {
    const ScenarioConfig cfg = apply_overrides(raw_cfg, opts);
    const auto consts = cfg.constants();
    validate(consts);

    const WaveField psi0 = scenario_initial_state(cfg);
    const Potential pot = scenario_potential(cfg);
    const auto history =
        propagate(psi0, pot, consts, cfg.t_final, cfg.dt, cfg.snapshot_every);
    const auto series = DensitySeries::from_history(history);

    EnsembleRecord rec;
    rec.noise = cfg.noise;
    rec.base_seed = cfg.base_seed;
    if (cfg.n_trajectories > 0) {
        EnsembleSpec spec;
        spec.n_trajectories = cfg.n_trajectories;
        spec.base_seed = cfg.base_seed;
        spec.noise = cfg.noise;
        spec.dt_sub = cfg.dt_sub;
        spec.record_every = cfg.record_every;
        rec = run_ensemble(history, spec, opts.workers);
    }

    RunResult result;
    result.report = run_checks(cfg, rec, series);
    result.exit_code = result.report.all_pass() ? 0 : 1;
    result.dir = fs::path(cfg.output_dir);

    fs::create_directories(result.dir);
    write_file(result.dir / "config.ini", serialize_config(cfg));

    for (int i = 0; i < history.size(); ++i) {
        const auto& rho = series.fields[i];
        std::string body = "x,rho\n";
        char buf[96];
        for (int k = 0; k < rho.grid.n_points; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", rho.grid.x(k),
                          rho.values[k]);
            body += buf;
        }
        write_file(result.dir / density_file_name(i), body);
    }

    {
        std::string body = "t,traj,x,zeta\n";
        char buf[128];
        for (int j = 0; j < rec.n_times(); ++j) {
            for (int i = 0; i < rec.n_trajectories(); ++i) {
                if (rec.escaped[i]) continue;
                std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g\n",
                              rec.times[j], i, rec.positions[j][i], rec.zeta[j][i]);
                body += buf;
            }
        }
        write_file(result.dir / "trajectories.csv", body);
    }

    write_file(result.dir / "report.txt", report_to_text(result.report));
    write_file(result.dir / "manifest.txt",
               manifest_text(cfg, history.size(), rec, result.exit_code));
    return result;
}

namespace {

std::vector<std::vector<double>> read_csv(const fs::path& path, int n_cols) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(n_cols);
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (static_cast<int>(row.size()) != n_cols)
            throw std::runtime_error("bad row in " + path.string());
        rows.push_back(std::move(row));
    }
    return rows;
}

DensitySeries load_density_series(const fs::path& dir, const ScenarioConfig& cfg) {
    DensitySeries series;
    const auto grid = build_grid(cfg.x_min, cfg.x_max, cfg.n_points);
    for (int i = 0;; ++i) {
        const auto path = dir / density_file_name(i);
        if (!fs::exists(path)) break;
        const auto rows = read_csv(path, 2);
        if (static_cast<int>(rows.size()) != grid.n_points)
            throw std::runtime_error("density file length mismatch: " + path.string());
        DensityField rho;
        rho.grid = grid;
        rho.time = i * cfg.dt * cfg.snapshot_every;
        rho.values.reserve(rows.size());
        for (const auto& r : rows) rho.values.push_back(r[1]);
        series.times.push_back(rho.time);
        series.fields.push_back(std::move(rho));
    }
    if (series.fields.empty())
        throw std::runtime_error("no density snapshots in " + dir.string());
    return series;
}

EnsembleRecord load_record(const fs::path& dir, const ScenarioConfig& cfg) {
    const auto rows = read_csv(dir / "trajectories.csv", 4);
    EnsembleRecord rec;
    rec.noise = cfg.noise;
    rec.base_seed = cfg.base_seed;
    if (rows.empty()) return rec;

    // rows are time-major; count trajectories from the first block
    size_t per_time = 0;
    while (per_time < rows.size() && rows[per_time][0] == rows[0][0]) ++per_time;
    const size_t n_times = rows.size() / per_time;
    if (rows.size() % per_time != 0)
        throw std::runtime_error("trajectories.csv is not a complete grid");

    rec.escaped.assign(per_time, 0);
    rec.r0.resize(per_time);
    rec.positions.assign(n_times, std::vector<double>(per_time, 0.0));
    rec.zeta.assign(n_times, std::vector<double>(per_time, 0.0));
    rec.times.resize(n_times);
    for (size_t j = 0; j < n_times; ++j) {
        rec.times[j] = rows[j * per_time][0];
        for (size_t i = 0; i < per_time; ++i) {
            const auto& r = rows[j * per_time + i];
            rec.positions[j][i] = r[2];
            rec.zeta[j][i] = r[3];
        }
    }
    rec.r0 = rec.positions[0];
    return rec;
}

}  // namespace

RunResult check_run(const fs::path& dir) {
    const auto cfg = parse_config_file(dir / "config.ini");
    const auto series = load_density_series(dir, cfg);
    const auto rec = load_record(dir, cfg);
    RunResult result;
    result.dir = dir;
    result.report = run_checks(cfg, rec, series);
    result.exit_code = result.report.all_pass() ? 0 : 1;
    return result;
}

void emit_plot_data(const fs::path& dir) {
    const auto cfg = parse_config_file(dir / "config.ini");
    const auto series = load_density_series(dir, cfg);
    const auto rec = load_record(dir, cfg);
    const auto plot_dir = dir / "plot";
    fs::create_directories(plot_dir);

    std::string manifest = "source = " + dir.string() + "\n";
    const bool have_traj = rec.n_trajectories() > 0;

    int emitted = 0;
    for (size_t s = 0; s < series.times.size(); ++s) {
        const double t = series.times[s];
        int jt = -1;
        for (int j = 0; j < rec.n_times(); ++j)
            if (std::abs(rec.times[j] - t) <= 1e-9 * std::max(1.0, std::abs(t))) jt = j;
        if (!have_traj || jt < 0) continue;

        std::vector<double> col;
        for (int i = 0; i < rec.n_trajectories(); ++i)
            col.push_back(rec.positions[jt][i]);
        const auto hist = histogram_density(col, series.fields[s].grid, cfg.n_bins);
        const auto coarse = coarsen_density(series.fields[s], cfg.n_bins);

        char name[48];
        std::snprintf(name, sizeof(name), "density_hist_%04zu.csv", s);
        std::string body = "bin_center,rho,hist\n";
        char buf[128];
        for (int b = 0; b < hist.grid.n_points; ++b) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n",
                          hist.grid.x(b) + 0.5 * hist.grid.dx, coarse.values[b],
                          hist.values[b]);
            body += buf;
        }
        write_file(plot_dir / name, body);
        ++emitted;
    }
    manifest += "density_hist_files = " + std::to_string(emitted) + "\n";

    if (have_traj) {
        std::string body = "t,traj,x\n";
        char buf[96];
        for (int j = 0; j < rec.n_times(); ++j)
            for (int i = 0; i < rec.n_trajectories(); ++i) {
                std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g\n", rec.times[j], i,
                              rec.positions[j][i]);
                body += buf;
            }
        write_file(plot_dir / "fan.csv", body);
        manifest += "fan_rows = " +
                    std::to_string(static_cast<long>(rec.n_times()) *
                                   rec.n_trajectories()) +
                    "\n";
    } else {
        manifest += "histograms_omitted = no trajectories in this run\n";
    }
    write_file(plot_dir / "manifest.txt", manifest);
}

}  // namespace qtraj
