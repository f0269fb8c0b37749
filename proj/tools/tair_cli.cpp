// Command-line front end: builds an ExperimentSpec from flags (plus an
// optional config file) and emits the requested report as CSV or JSON.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tair/report.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{
        "tair: turnover-adjusted information ratios for autocorrelated "
        "signals"};
    app.set_config("--config", "",
                   "read options from an INI/TOML file (flags override)");

    tair::ExperimentSpec spec;
    std::string command;
    double decay = -1.0;
    std::vector<double> decay_grid;

    app.add_option("command", command, "one of {theory, simulate, sweep, optimize, crossover}")
        ->required()
        ->check(CLI::IsMember(
            {"theory", "simulate", "sweep", "optimize", "crossover"}));

    app.add_option("--mu-ic", spec.mu_ic, "mean information coefficient")
        ->capture_default_str();
    auto* v_ic_opt =
        app.add_option("--v-ic", spec.v_ic,
                       "information coefficient volatility (default 0.05; "
                       "0.1 for sweep/optimize)");
    auto* decay_opt = app.add_option(
        "--decay", decay, "single signal decay value, 1 - autocorrelation");
    app.add_option("--decay-grid", decay_grid,
                   "comma-separated decay values (default 0.05..0.40 for "
                   "theory/simulate, 0..1 for crossover)")
        ->delimiter(',')
        ->excludes(decay_opt);
    app.add_option("--n", spec.n, "universe size")->capture_default_str();
    app.add_option("--te", spec.te, "target tracking error")
        ->capture_default_str();
    app.add_option("--tcost", spec.tcost, "one-way transaction cost")
        ->capture_default_str();
    app.add_option("--vol-log-mean", spec.vol_log_mean,
                   "mean of log idiosyncratic volatility")
        ->capture_default_str();
    app.add_option("--vol-log-sd", spec.vol_log_sd,
                   "sd of log idiosyncratic volatility")
        ->capture_default_str();
    app.add_option("--periods", spec.periods, "periods per simulated history")
        ->capture_default_str();
    app.add_option("--reps", spec.reps, "simulation repetitions per grid row")
        ->capture_default_str();
    app.add_option("--seed", spec.seed, "base random seed")
        ->capture_default_str();
    app.add_option("--workers", spec.workers,
                   "simulation worker threads, 0 = all cores")
        ->capture_default_str();
    app.add_option("--grid-points", spec.grid_points,
                   "curve resolution for sweep/optimize")
        ->capture_default_str();
    app.add_option("--max-cells", spec.max_cells,
                   "refusal cap on grid rows x reps x n x periods")
        ->capture_default_str();
    app.add_flag("--exact-constants", spec.exact_constants,
                 "use exact quintile spread/idio constants instead of the "
                 "rounded ones");

    std::map<std::string, tair::PortfolioKind> kinds{
        {"mv", tair::PortfolioKind::mean_variance},
        {"quintile", tair::PortfolioKind::quintile_long_short}};
    app.add_option("--kind", spec.kind, "portfolio construction")
        ->transform(CLI::CheckedTransformer(kinds))
        ->default_str("mv");

    std::map<std::string, tair::BlendType> blends{
        {"one-lag", tair::BlendType::one_lag},
        {"ewma", tair::BlendType::ewma}};
    app.add_option("--blend", spec.blend, "signal blending family")
        ->transform(CLI::CheckedTransformer(blends))
        ->default_str("ewma");

    std::map<std::string, tair::OutputFormat> formats{
        {"csv", tair::OutputFormat::csv}, {"json", tair::OutputFormat::json}};
    app.add_option("--format", spec.format, "output format")
        ->transform(CLI::CheckedTransformer(formats))
        ->default_str("csv");

    app.add_option("--out", spec.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    if (command == "theory") spec.command = tair::Command::theory;
    if (command == "simulate") spec.command = tair::Command::simulate;
    if (command == "sweep") spec.command = tair::Command::sweep;
    if (command == "optimize") spec.command = tair::Command::optimize;
    if (command == "crossover") spec.command = tair::Command::crossover;

    const bool blend_command = spec.command == tair::Command::sweep ||
                               spec.command == tair::Command::optimize;
    if (blend_command && v_ic_opt->count() == 0) spec.v_ic = 0.1;
    if (decay_opt->count() > 0) {
        spec.decay_grid = {decay};
    } else if (!decay_grid.empty()) {
        spec.decay_grid = decay_grid;
    } else if (blend_command) {
        spec.decay_grid = {0.1};
    } else if (spec.command == tair::Command::crossover) {
        spec.decay_grid.clear();
        for (int i = 0; i <= 50; ++i) spec.decay_grid.push_back(i * 0.02);
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        const tair::ReportTable table = tair::run_command(spec);
        const std::string body = tair::render(table, spec.format);
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;

        if (spec.out.empty()) {
            std::cout << body;
        } else {
            std::ofstream file(spec.out, std::ios::binary);
            if (!file) {
                std::cerr << "usage error: cannot open " << spec.out
                          << " for writing\n";
                return 2;
            }
            file << body;
        }
        std::fprintf(stderr, "runtime_seconds=%.3f\n", elapsed.count());
        return 0;
    } catch (const tair::ResourceLimitError& e) {
        std::cerr << "resource refusal: " << e.what() << "\n";
        return 3;
    } catch (const tair::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
