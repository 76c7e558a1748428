#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtraj/grid.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj {

enum class ScenarioKind {
    FreeGaussian,
    HarmonicCoherent,
    TwoGaussianSuperposition,
    GaussianBarrier,
};

const char* scenario_name(ScenarioKind kind);

enum class CheckKind {
    MeanConsistency,
    Equivariance,
    ZetaMean,
    GConstraint,
    ChapmanKolmogorov,
};

const char* check_name(CheckKind kind);

/// Parse/validation failure; key names the offending config key ("" when the
/// problem is structural, e.g. a malformed line).
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

  private:
    std::string key_;
};

/// One run: scenario, physics, discretization, ensemble and check requests.
/// parse_config fills defaults for every omitted key, so serializing the
/// parsed value echoes the complete effective configuration.
struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::FreeGaussian;
    std::string output_dir = "run_out";

    double hbar = 1.0;
    double mass = 1.0;

    double x_min = -20.0;
    double x_max = 20.0;
    int n_points = 1024;

    // initial state
    double center = 0.0;
    double k0 = 0.0;
    double sigma0 = 1.0;
    double separation = 8.0;  // two_gaussian_superposition only

    // potential
    double omega = 1.0;  // harmonic_coherent
    double barrier_height = 2.0;
    double barrier_width = 1.0;
    double barrier_center = 0.0;

    // time stepping
    double t_final = 2.0;
    double dt = 1e-3;
    int snapshot_every = 10;

    // ensemble
    int n_trajectories = 10000;
    std::uint64_t base_seed = 12345;
    NoiseKind noise = NoiseKind::Zero;
    double dt_sub = 0.01;
    int record_every = 2;

    // checks
    std::vector<CheckKind> checks;
    std::vector<double> check_times;
    int n_bins = 64;
    double tv_threshold = 0.02;
    std::vector<double> ck_times;
    int ck_bins = 8;
    double ck_lo = 0.0;  // ck_lo == ck_hi means: derive the range from data
    double ck_hi = 0.0;
    int bootstrap = 200;

    bool operator==(const ScenarioConfig&) const = default;

    PhysicalConstants constants() const { return {hbar, mass}; }
};

/// Parses the flat sectioned key=value format. Unknown keys, type
/// mismatches, and constraint violations throw ConfigError naming the key
/// and the line.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::filesystem::path& path);

/// Canonical text with every key present, in a fixed order.
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace qtraj
