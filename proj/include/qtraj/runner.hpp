#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "qtraj/config.hpp"
#include "qtraj/stats.hpp"

namespace qtraj {

/// Command-line overrides applied on top of a parsed config.
struct RunOptions {
    std::optional<int> n_trajectories;
    std::optional<std::uint64_t> seed;
    std::optional<NoiseKind> noise;
    std::optional<std::string> output_dir;
    int workers = 1;
};

struct RunResult {
    int exit_code = 0;  // 0 iff every requested check passed
    ConsistencyReport report;
    std::filesystem::path dir;
};

/// Builds the scenario, propagates, integrates the ensemble, runs the
/// requested checks, and writes the artifact set: config.ini (the effective
/// configuration echo), manifest.txt, density_####.csv per snapshot,
/// trajectories.csv (surviving paths, time-major), report.txt. Escape-rate
/// violations surface as EscapeRateError.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

/// Re-evaluates every requested check from the artifacts stored in a run
/// directory; returns the freshly computed report and the exit code it
/// implies. Reads only.
RunResult check_run(const std::filesystem::path& dir);

/// Derives plot-ready files under <dir>/plot: per paired snapshot/record
/// time a density-vs-histogram table, plus the trajectory fan. Histogram
/// and fan files are omitted (and noted in plot/manifest.txt) when the run
/// had no trajectories.
void emit_plot_data(const std::filesystem::path& dir);

/// Scenario assembly shared by the runner and the tests.
Potential scenario_potential(const ScenarioConfig& cfg);
WaveField scenario_initial_state(const ScenarioConfig& cfg);

}  // namespace qtraj
