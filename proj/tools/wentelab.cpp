// wentelab: runs the verification suites and writes CSV tables plus a
// plain-text summary. Exit status 0 iff every checked row passes.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "wente/experiments.hpp"

namespace {

void add_common(CLI::App& app, wente::ExperimentConfig& cfg) {
    app.add_option("--seed", cfg.seed, "RNG seed");
    app.add_option("--grid-levels", cfg.levels, "resolved dyadic levels")->check(CLI::PositiveNumber);
    app.add_option("--nodes-per-level", cfg.nodes_per_level, "radial nodes per dyadic annulus")->check(CLI::Range(4, 1024));
    app.add_option("--n-theta", cfg.n_theta, "angular nodes")->check(CLI::Range(8, 1 << 16));
    app.add_option("--core-levels", cfg.core_levels, "extra levels below the resolved range")->check(CLI::NonNegativeNumber);
    app.add_option("--samples", cfg.samples, "random pairs")->check(CLI::PositiveNumber);
    app.add_option("--family", cfg.family, "random-mode | random-poly")
        ->check(CLI::IsMember({"random-mode", "random-poly"}));
    app.add_option("--max-mode", cfg.max_mode, "random-mode angular cut-off");
    app.add_option("--poly-degree", cfg.poly_degree, "random-poly total degree");
    app.add_option("--alpha-list", cfg.alphas, "weight exponents alpha")->delimiter(',');
    app.add_option("--sweep-alphas", cfg.sweep_alphas, "counterexample sweep (default 2^-k, k=0..8)")->delimiter(',');
    app.add_option("--beta", cfg.betas, "sweep exponents")->delimiter(',');
    app.add_option("--j-max", cfg.j_max, "deepest decomposition level");
    app.add_option("--out", cfg.out_dir, "output directory for CSV tables and summary.txt");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted Wente inequality verification suites"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file with option defaults");

    wente::ExperimentConfig cfg;
    add_common(app, cfg);
    app.fallthrough();

    using Runner = wente::SuiteReport (*)(const wente::ExperimentConfig&);
    Runner runner = nullptr;
    const std::pair<const char*, Runner> commands[] = {
        {"validate-solver", wente::run_solver_validation},
        {"random-suite", wente::run_random_suite},
        {"dyadic-audit", wente::run_dyadic_audit},
        {"counterexample", wente::run_counterexample},
        {"lorentz-check", wente::run_lorentz_check},
        {"all", wente::run_all},
    };
    for (const auto& [name, fn] : commands) {
        auto* sub = app.add_subcommand(name);
        sub->callback([&runner, fn = fn] { runner = fn; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const wente::SuiteReport report = runner(cfg);
        wente::write_summary(std::cout, report);
        if (report.resampled > 0) std::cout << "resampled degenerate draws: " << report.resampled << '\n';
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            std::ofstream os(std::filesystem::path(cfg.out_dir) / "summary.txt");
            wente::write_summary(os, report);
        }
        return report.pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "wentelab: " << e.what() << '\n';
        return 2;
    }
}
