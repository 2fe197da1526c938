// selfheal: run, sweep, verify and plot self-healing experiments.
//
// Exit codes: 0 success, 1 config error, 2 invariant violation, 3 I/O error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "selfheal/config.hpp"
#include "selfheal/harness.hpp"
#include "selfheal/io.hpp"

namespace {

using namespace selfheal;

constexpr int exit_config = 1;
constexpr int exit_invariant = 2;
constexpr int exit_io = 3;

std::string write_results(const ExperimentConfig& cfg, const ExperimentResult& result)
{
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) {
        throw IoError(fmt::format("cannot create output directory '{}': {}", cfg.out_dir, ec.message()));
    }
    const std::string path = (std::filesystem::path(cfg.out_dir) / (cfg.result_stem() + ".csv")).string();
    write_csv(result.runs, path);
    return path;
}

void print_summary(const ExperimentConfig& cfg, const ExperimentResult& result, const std::string& path)
{
    double peak_delta = 0;
    double peak_str = 0;
    int with_stretch = 0;
    for (const RunResult& run : result.runs) {
        peak_delta += peak_max_delta(run);
        if (const auto s = peak_stretch(run)) {
            peak_str += *s;
            ++with_stretch;
        }
    }
    const double k = static_cast<double>(result.runs.size());
    std::cout << fmt::format("{:<28} replicates={} mean_peak_max_delta={:.3f}", cfg.result_stem(), result.runs.size(),
                             peak_delta / k);
    if (with_stretch > 0) {
        std::cout << fmt::format(" mean_peak_stretch={:.3f}", peak_str / with_stretch);
    }
    if (!path.empty()) {
        std::cout << " -> " << path;
    }
    std::cout << '\n';
}

int run_configs(const std::vector<ExperimentConfig>& configs, bool write)
{
    for (const ExperimentConfig& cfg : configs) {
        const ExperimentResult result = run_experiment(cfg);
        const std::string path = write ? write_results(cfg, result) : std::string{};
        print_summary(cfg, result, path);
    }
    return 0;
}

int verify_configs(const std::vector<ExperimentConfig>& configs)
{
    bool violated = false;
    for (const ExperimentConfig& cfg : configs) {
        const ExperimentResult result = run_experiment(cfg);
        const auto required = applicable_lemmas(cfg.healer);
        int checked = 0;
        bool failed = false;
        for (const RunResult& run : result.runs) {
            LemmaTally tally = run.lemmas;
            tally.add(0, run.initial_report);
            checked += tally.rounds_checked;
            for (const std::string& name : required) {
                if (auto it = tally.failures.find(name); it != tally.failures.end()) {
                    failed = true;
                    std::cout << fmt::format("FAIL {} replicate {} {}: {} rounds, first at {}\n", cfg.result_stem(),
                                             run.replicate, name, it->second, tally.first_failure.at(name));
                }
            }
        }
        if (required.empty()) {
            std::cout << fmt::format("SKIP {} (no lemma applies to this healer)\n", cfg.result_stem());
        } else {
            std::cout << fmt::format("{} {} ({} rounds checked)\n", failed ? "DONE" : "OK  ", cfg.result_stem(), checked);
        }
        violated = violated || failed;
    }
    return violated ? exit_invariant : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Adversarial deletion and self-healing simulator"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run one configuration and write its CSV");
    run->add_option("--config", config_path, "JSON config file")->required();
    auto* sweep = app.add_subcommand("sweep", "Run every combination listed in the config");
    sweep->add_option("--config", config_path, "JSON config file")->required();
    auto* verify = app.add_subcommand("verify", "Run with lemma checks; exit 2 on any violation");
    verify->add_option("--config", config_path, "JSON config file")->required();

    std::vector<std::string> csv_paths;
    std::string metric;
    std::string out_path;
    std::string axis = "round";
    auto* plot = app.add_subcommand("plot", "Render a metric from result CSVs as SVG");
    plot->add_option("--csv", csv_paths, "Result CSV (repeatable)")->required();
    plot->add_option("--metric", metric, "Column to plot")->required();
    plot->add_option("--out", out_path, "Output SVG path")->required();
    plot->add_option("--x", axis, "x axis: round or n")->check(CLI::IsMember({"round", "n"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*plot) {
            emit_svg_plot(csv_paths, metric, out_path, parse_plot_axis(axis));
            return 0;
        }
        const std::vector<ExperimentConfig> configs = load_config(config_path);
        if (*run) {
            if (configs.size() != 1) {
                throw ConfigError(fmt::format("run expects a single configuration but the config expands to {}; use sweep",
                                              configs.size()));
            }
            return run_configs(configs, true);
        }
        if (*sweep) {
            return run_configs(configs, true);
        }
        return verify_configs(configs);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const HealingFailure& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return exit_invariant;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }
}
