// comomab: run a configured bandit experiment and write result CSVs.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime/output error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "comomab/config.hpp"
#include "comomab/results.hpp"
#include "comomab/simkit.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Combinatorial multi-objective bandit experiment runner"};
    std::filesystem::path config_path;
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> runs;
    std::optional<std::uint64_t> horizon;
    std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
    bool emit_plots = false;

    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--out-dir", out_dir, "directory for result files")->capture_default_str();
    app.add_option("--seed", seed, "master seed (overrides the config)");
    app.add_option("--runs", runs, "replications per policy (overrides the config)")->check(CLI::PositiveNumber);
    app.add_option("--horizon", horizon, "time horizon T (overrides the config)")->check(CLI::PositiveNumber);
    app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_flag("--emit-plots", emit_plots, "also write a gnuplot script");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    comomab::ConfigFile cfg;
    comomab::ExperimentSpec spec;
    try {
        cfg = comomab::load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (runs) cfg.runs = *runs;
        if (horizon) cfg.horizon = *horizon;
        spec = comomab::make_experiment_spec(cfg, workers);
    } catch (const comomab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const comomab::ConfigurationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    std::cout << comomab::to_text(cfg) << std::flush;

    try {
        const comomab::ExperimentResult result = comomab::run_experiment(spec);
        const auto written = comomab::write_results(result, *spec.environment, spec.horizon, out_dir, emit_plots);
        for (const auto& path : written) std::cerr << "wrote " << path.string() << '\n';
    } catch (const comomab::ConfigurationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
