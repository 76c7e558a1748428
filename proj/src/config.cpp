#include "qtraj/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace qtraj {

const char* scenario_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::FreeGaussian: return "free_gaussian";
        case ScenarioKind::HarmonicCoherent: return "harmonic_coherent";
        case ScenarioKind::TwoGaussianSuperposition: return "two_gaussian_superposition";
        case ScenarioKind::GaussianBarrier: return "gaussian_barrier";
    }
    return "?";
}

const char* check_name(CheckKind kind) {
    switch (kind) {
        case CheckKind::MeanConsistency: return "mean_consistency";
        case CheckKind::Equivariance: return "equivariance";
        case CheckKind::ZetaMean: return "zeta_mean";
        case CheckKind::GConstraint: return "g_constraint";
        case CheckKind::ChapmanKolmogorov: return "chapman_kolmogorov";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(key, "key '" + key + "' (line " + std::to_string(line) +
                                   "): expected a number, got '" + v + "'");
    return x;
}

long parse_int(const std::string& key, const std::string& v, int line) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(key, "key '" + key + "' (line " + std::to_string(line) +
                                   "): expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v, int line) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(key, "key '" + key + "' (line " + std::to_string(line) +
                                   "): expected an unsigned integer, got '" + v + "'");
    return x;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

NoiseKind parse_noise(const std::string& key, const std::string& v, int line) {
    if (v == "zero") return NoiseKind::Zero;
    if (v == "white") return NoiseKind::WhiteNoise;
    if (v == "nelson") return NoiseKind::NelsonOsmotic;
    throw ConfigError(key, "key '" + key + "' (line " + std::to_string(line) +
                               "): expected zero|white|nelson, got '" + v + "'");
}

ScenarioKind parse_scenario(const std::string& v, int line) {
    for (auto k : {ScenarioKind::FreeGaussian, ScenarioKind::HarmonicCoherent,
                   ScenarioKind::TwoGaussianSuperposition, ScenarioKind::GaussianBarrier})
        if (v == scenario_name(k)) return k;
    throw ConfigError("scenario", "key 'scenario' (line " + std::to_string(line) +
                                      "): unknown scenario '" + v + "'");
}

CheckKind parse_check(const std::string& v, int line) {
    for (auto k : {CheckKind::MeanConsistency, CheckKind::Equivariance,
                   CheckKind::ZetaMean, CheckKind::GConstraint,
                   CheckKind::ChapmanKolmogorov})
        if (v == check_name(k)) return k;
    throw ConfigError("checks.list", "key 'checks.list' (line " + std::to_string(line) +
                                         "): unknown check '" + v + "'");
}

void require(bool cond, const std::string& key, const std::string& what) {
    if (!cond) throw ConfigError(key, "key '" + key + "': " + what);
}

void validate(const ScenarioConfig& c) {
    require(c.hbar > 0.0, "constants.hbar", "must be > 0");
    require(c.mass > 0.0, "constants.mass", "must be > 0");
    require(c.x_max > c.x_min, "grid.x_max", "grid interval is degenerate");
    require(is_power_of_two(c.n_points) && c.n_points >= 16, "grid.n_points",
            "must be a power of two >= 16");
    require(c.sigma0 > 0.0, "initial.sigma0", "must be > 0");
    require(c.omega > 0.0, "potential.omega", "must be > 0");
    require(c.barrier_width > 0.0, "potential.barrier_width", "must be > 0");
    require(c.t_final >= 0.0, "time.t_final", "must be >= 0");
    require(c.dt > 0.0, "time.dt", "must be > 0");
    require(c.snapshot_every >= 1, "time.snapshot_every", "must be >= 1");
    require(c.n_trajectories >= 0, "ensemble.n", "must be >= 0");
    require(c.dt_sub > 0.0, "ensemble.dt_sub", "must be > 0");
    require(c.record_every >= 1, "ensemble.record_every", "must be >= 1");
    require(c.n_bins >= 1, "checks.n_bins", "must be >= 1");
    require(c.tv_threshold > 0.0, "checks.tv_threshold", "must be > 0");
    require(c.ck_bins >= 2, "checks.ck_bins", "must be >= 2");
    require(c.bootstrap >= 10, "checks.bootstrap", "must be >= 10");

    std::set<CheckKind> seen(c.checks.begin(), c.checks.end());
    require(seen.size() == c.checks.size(), "checks.list", "duplicate check");
    const bool needs_times =
        !c.checks.empty() &&
        !(c.checks.size() == 1 && c.checks[0] == CheckKind::ChapmanKolmogorov);
    if (needs_times)
        require(!c.check_times.empty(), "checks.times",
                "required when checks are requested");
    if (seen.count(CheckKind::ZetaMean))
        require(c.noise != NoiseKind::Zero, "checks.list",
                "zeta_mean needs a stochastic noise model");
    if (seen.count(CheckKind::ChapmanKolmogorov))
        require(c.ck_times.size() == 3, "checks.ck_times",
                "chapman_kolmogorov needs exactly three times t0 < t1 < t2");

    // Check times must land on both the snapshot and the record lattice.
    const double snap = c.dt * c.snapshot_every;
    const double rec = c.dt_sub * c.record_every;
    auto aligned = [&](double t, const char* key) {
        require(t >= 0.0 && t <= c.t_final + 1e-9, key, "time outside the run span");
        const double si = t / snap, ri = t / rec;
        require(std::abs(si - std::round(si)) < 1e-6, key,
                "time does not land on a density snapshot");
        require(std::abs(ri - std::round(ri)) < 1e-6, key,
                "time does not land on a trajectory record");
    };
    for (double t : c.check_times) aligned(t, "checks.times");
    for (double t : c.ck_times) aligned(t, "checks.ck_times");
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    bool scenario_seen = false;

    using Setter = std::function<void(ScenarioConfig&, const std::string&, int)>;
    auto dbl = [](double ScenarioConfig::* member, const char* key) -> Setter {
        return [member, key](ScenarioConfig& c, const std::string& v, int line) {
            c.*member = parse_double(key, v, line);
        };
    };
    auto intval = [](int ScenarioConfig::* member, const char* key) -> Setter {
        return [member, key](ScenarioConfig& c, const std::string& v, int line) {
            c.*member = static_cast<int>(parse_int(key, v, line));
        };
    };
    auto dbl_list = [](std::vector<double> ScenarioConfig::* member,
                       const char* key) -> Setter {
        return [member, key](ScenarioConfig& c, const std::string& v, int line) {
            (c.*member).clear();
            for (const auto& item : split_list(v))
                (c.*member).push_back(parse_double(key, item, line));
        };
    };

    const std::map<std::string, Setter> setters = {
        {"scenario",
         [&scenario_seen](ScenarioConfig& c, const std::string& v, int line) {
             c.scenario = parse_scenario(v, line);
             scenario_seen = true;
         }},
        {"output_dir",
         [](ScenarioConfig& c, const std::string& v, int) { c.output_dir = v; }},
        {"constants.hbar", dbl(&ScenarioConfig::hbar, "constants.hbar")},
        {"constants.mass", dbl(&ScenarioConfig::mass, "constants.mass")},
        {"grid.x_min", dbl(&ScenarioConfig::x_min, "grid.x_min")},
        {"grid.x_max", dbl(&ScenarioConfig::x_max, "grid.x_max")},
        {"grid.n_points", intval(&ScenarioConfig::n_points, "grid.n_points")},
        {"initial.center", dbl(&ScenarioConfig::center, "initial.center")},
        {"initial.k0", dbl(&ScenarioConfig::k0, "initial.k0")},
        {"initial.sigma0", dbl(&ScenarioConfig::sigma0, "initial.sigma0")},
        {"initial.separation", dbl(&ScenarioConfig::separation, "initial.separation")},
        {"potential.omega", dbl(&ScenarioConfig::omega, "potential.omega")},
        {"potential.barrier_height",
         dbl(&ScenarioConfig::barrier_height, "potential.barrier_height")},
        {"potential.barrier_width",
         dbl(&ScenarioConfig::barrier_width, "potential.barrier_width")},
        {"potential.barrier_center",
         dbl(&ScenarioConfig::barrier_center, "potential.barrier_center")},
        {"time.t_final", dbl(&ScenarioConfig::t_final, "time.t_final")},
        {"time.dt", dbl(&ScenarioConfig::dt, "time.dt")},
        {"time.snapshot_every",
         intval(&ScenarioConfig::snapshot_every, "time.snapshot_every")},
        {"ensemble.n", intval(&ScenarioConfig::n_trajectories, "ensemble.n")},
        {"ensemble.base_seed",
         [](ScenarioConfig& c, const std::string& v, int line) {
             c.base_seed = parse_u64("ensemble.base_seed", v, line);
         }},
        {"ensemble.noise",
         [](ScenarioConfig& c, const std::string& v, int line) {
             c.noise = parse_noise("ensemble.noise", v, line);
         }},
        {"ensemble.dt_sub", dbl(&ScenarioConfig::dt_sub, "ensemble.dt_sub")},
        {"ensemble.record_every",
         intval(&ScenarioConfig::record_every, "ensemble.record_every")},
        {"checks.list",
         [](ScenarioConfig& c, const std::string& v, int line) {
             c.checks.clear();
             for (const auto& item : split_list(v))
                 c.checks.push_back(parse_check(item, line));
         }},
        {"checks.times", dbl_list(&ScenarioConfig::check_times, "checks.times")},
        {"checks.n_bins", intval(&ScenarioConfig::n_bins, "checks.n_bins")},
        {"checks.tv_threshold",
         dbl(&ScenarioConfig::tv_threshold, "checks.tv_threshold")},
        {"checks.ck_times", dbl_list(&ScenarioConfig::ck_times, "checks.ck_times")},
        {"checks.ck_bins", intval(&ScenarioConfig::ck_bins, "checks.ck_bins")},
        {"checks.ck_lo", dbl(&ScenarioConfig::ck_lo, "checks.ck_lo")},
        {"checks.ck_hi", dbl(&ScenarioConfig::ck_hi, "checks.ck_hi")},
        {"checks.bootstrap", intval(&ScenarioConfig::bootstrap, "checks.bootstrap")},
    };

    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::set<std::string> assigned;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("", "malformed section header at line " +
                                          std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", "expected key = value at line " +
                                      std::to_string(line_no));
        const std::string bare = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string key = section.empty() ? bare : section + "." + bare;
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError(key, "unknown key '" + key + "' at line " +
                                       std::to_string(line_no));
        if (!assigned.insert(key).second)
            throw ConfigError(key, "duplicate key '" + key + "' at line " +
                                       std::to_string(line_no));
        it->second(cfg, value, line_no);
    }
    if (!scenario_seen) throw ConfigError("scenario", "key 'scenario' is required");
    validate(cfg);
    return cfg;
}

ScenarioConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt(v[i]);
    }
    return out;
}
}  // namespace

std::string serialize_config(const ScenarioConfig& c) {
    std::string out;
    out += "scenario = " + std::string(scenario_name(c.scenario)) + "\n";
    out += "output_dir = " + c.output_dir + "\n\n";
    out += "[constants]\n";
    out += "hbar = " + fmt(c.hbar) + "\n";
    out += "mass = " + fmt(c.mass) + "\n\n";
    out += "[grid]\n";
    out += "x_min = " + fmt(c.x_min) + "\n";
    out += "x_max = " + fmt(c.x_max) + "\n";
    out += "n_points = " + std::to_string(c.n_points) + "\n\n";
    out += "[initial]\n";
    out += "center = " + fmt(c.center) + "\n";
    out += "k0 = " + fmt(c.k0) + "\n";
    out += "sigma0 = " + fmt(c.sigma0) + "\n";
    out += "separation = " + fmt(c.separation) + "\n\n";
    out += "[potential]\n";
    out += "omega = " + fmt(c.omega) + "\n";
    out += "barrier_height = " + fmt(c.barrier_height) + "\n";
    out += "barrier_width = " + fmt(c.barrier_width) + "\n";
    out += "barrier_center = " + fmt(c.barrier_center) + "\n\n";
    out += "[time]\n";
    out += "t_final = " + fmt(c.t_final) + "\n";
    out += "dt = " + fmt(c.dt) + "\n";
    out += "snapshot_every = " + std::to_string(c.snapshot_every) + "\n\n";
    out += "[ensemble]\n";
    out += "n = " + std::to_string(c.n_trajectories) + "\n";
    out += "base_seed = " + std::to_string(c.base_seed) + "\n";
    out += "noise = " + std::string(noise_name(c.noise)) + "\n";
    out += "dt_sub = " + fmt(c.dt_sub) + "\n";
    out += "record_every = " + std::to_string(c.record_every) + "\n\n";
    out += "[checks]\n";
    std::string list;
    for (size_t i = 0; i < c.checks.size(); ++i) {
        if (i) list += ",";
        list += check_name(c.checks[i]);
    }
    out += "list = " + list + "\n";
    out += "times = " + join_doubles(c.check_times) + "\n";
    out += "n_bins = " + std::to_string(c.n_bins) + "\n";
    out += "tv_threshold = " + fmt(c.tv_threshold) + "\n";
    out += "ck_times = " + join_doubles(c.ck_times) + "\n";
    out += "ck_bins = " + std::to_string(c.ck_bins) + "\n";
    out += "ck_lo = " + fmt(c.ck_lo) + "\n";
    out += "ck_hi = " + fmt(c.ck_hi) + "\n";
    out += "bootstrap = " + std::to_string(c.bootstrap) + "\n";
    return out;
}

}  // namespace qtraj
