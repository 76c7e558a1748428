#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

#include "qtraj/runner.hpp"

namespace {

int worker_count_from_env() {
    if (const char* env = std::getenv("QTRAJ_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

qtraj::NoiseKind parse_noise_flag(const std::string& s) {
    if (s == "zero") return qtraj::NoiseKind::Zero;
    if (s == "white") return qtraj::NoiseKind::WhiteNoise;
    if (s == "nelson") return qtraj::NoiseKind::NelsonOsmotic;
    throw CLI::ValidationError("--noise must be zero|white|nelson");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wave-guided trajectory ensembles with consistency checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string run_dir;
    int n_override = -1;
    long long seed_override = -1;
    std::string noise_override;
    std::string out_override;
    bool plots = false;

    auto* run = app.add_subcommand("run", "execute a scenario config");
    run->add_option("config", config_path, "path to the config file")->required();
    run->add_option("--n", n_override, "override ensemble size");
    run->add_option("--seed", seed_override, "override base seed");
    run->add_option("--noise", noise_override, "override noise model (zero|white|nelson)");
    run->add_option("--out", out_override, "override output directory");
    run->add_flag("--plots", plots, "also emit plot-ready files");

    auto* check = app.add_subcommand("check", "re-evaluate the report of a stored run");
    check->add_option("run_dir", run_dir, "run directory")->required();

    auto* plot = app.add_subcommand("plot-data", "emit plot-ready files for a stored run");
    plot->add_option("run_dir", run_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = qtraj::parse_config_file(config_path);
            qtraj::RunOptions opts;
            opts.workers = worker_count_from_env();
            if (n_override >= 0) opts.n_trajectories = n_override;
            if (seed_override >= 0) opts.seed = static_cast<std::uint64_t>(seed_override);
            if (!noise_override.empty()) opts.noise = parse_noise_flag(noise_override);
            if (!out_override.empty()) opts.output_dir = out_override;

            const auto result = qtraj::run_scenario(cfg, opts);
            std::cout << qtraj::report_to_text(result.report);
            std::cout << "artifacts: " << result.dir.string() << "\n";
            if (plots) qtraj::emit_plot_data(result.dir);
            return result.exit_code;
        }
        if (check->parsed()) {
            const auto result = qtraj::check_run(run_dir);
            std::cout << qtraj::report_to_text(result.report);
            return result.exit_code;
        }
        qtraj::emit_plot_data(run_dir);
        return 0;
    } catch (const qtraj::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const qtraj::EscapeRateError& e) {
        std::cerr << "aborted: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
