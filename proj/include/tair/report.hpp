// report.hpp
//
// Experiment orchestration and report emission for the CLI: theory tables,
// simulation comparisons, blend-objective sweeps, blend optimization, and
// the mean-variance/quintile crossover scan. Tables render to CSV or JSON
// with all numerics at 9 significant digits, so a rerun of the same spec
// produces byte-identical artifacts.

#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tair/analytics.hpp"
#include "tair/integrated_signals.hpp"
#include "tair/sim_engine.hpp"
#include "tair/stat_kernels.hpp"

namespace tair {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { theory, simulate, sweep, optimize, crossover };
enum class BlendType { one_lag, ewma };
enum class OutputFormat { csv, json };

struct ExperimentSpec {
    Command command = Command::theory;
    PortfolioKind kind = PortfolioKind::mean_variance;
    BlendType blend = BlendType::ewma;
    OutputFormat format = OutputFormat::csv;

    double mu_ic = 0.05;
    double v_ic = 0.05;
    std::vector<double> decay_grid = {0.05, 0.10, 0.15, 0.20,
                                      0.25, 0.30, 0.35, 0.40};
    std::size_t n = 5000;
    double te = 0.05;
    double tcost = 0.01;
    double vol_log_mean = -0.722;
    double vol_log_sd = 0.306;
    std::size_t periods = 600;
    std::size_t reps = 1000;
    std::uint64_t seed = 42;
    unsigned workers = 0;
    std::size_t grid_points = 101;  // curve resolution for sweep/optimize
    bool exact_constants = false;
    double max_cells = 1e11;  // refusal cap on grid_rows * reps * n * periods
    std::string out;          // empty writes to stdout
};

// Cells and metadata values are pre-rendered tokens: plain JSON numbers,
// "na" for unavailable cells, or quoted strings in metadata.
struct ReportTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

namespace detail {

inline std::string fmt_num(double x) {
    if (x != x) return "na";
    if (x == 0.0) x = 0.0;  // normalize -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline std::string fmt_count(std::uint64_t x) { return std::to_string(x); }

inline std::string quoted(const std::string& s) { return "\"" + s + "\""; }

inline const char* kind_name(PortfolioKind kind) {
    return kind == PortfolioKind::mean_variance ? "mv" : "quintile";
}

inline const char* blend_name(BlendType blend) {
    return blend == BlendType::one_lag ? "one-lag" : "ewma";
}

inline SignalStats spec_stats(const ExperimentSpec& spec, double decay) {
    return SignalStats(spec.mu_ic, spec.v_ic, Correlation(1.0 - decay));
}

inline UniverseStats spec_universe(const ExperimentSpec& spec) {
    return lognormal_universe_stats(
        LogNormalVolModel(spec.vol_log_mean, spec.vol_log_sd), spec.n);
}

inline CostParams spec_costs(const ExperimentSpec& spec) {
    return CostParams(spec.tcost, spec.te);
}

inline QuintileConstantSet spec_constants(const ExperimentSpec& spec) {
    return spec.exact_constants ? QuintileConstantSet::exact()
                                : QuintileConstantSet::printed();
}

inline void check_decay_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw UsageError("decay grid must not be empty");
    double prev = -1.0;
    for (double d : grid) {
        if (!(d >= 0.0 && d <= 1.0))
            throw UsageError("decay values must lie in [0, 1]");
        if (d <= prev)
            throw UsageError("decay grid must be strictly increasing");
        prev = d;
    }
}

inline void base_metadata(const ExperimentSpec& spec, const char* command,
                          ReportTable& table) {
    table.metadata.emplace_back("command", quoted(command));
    table.metadata.emplace_back("kind", quoted(kind_name(spec.kind)));
    table.metadata.emplace_back("mu_ic", fmt_num(spec.mu_ic));
    table.metadata.emplace_back("v_ic", fmt_num(spec.v_ic));
    table.metadata.emplace_back("n", fmt_count(spec.n));
    table.metadata.emplace_back("te", fmt_num(spec.te));
    table.metadata.emplace_back("tcost", fmt_num(spec.tcost));
    table.metadata.emplace_back("vol_log_mean", fmt_num(spec.vol_log_mean));
    table.metadata.emplace_back("vol_log_sd", fmt_num(spec.vol_log_sd));
}

}  // namespace detail

inline ReportTable cmd_theory(const ExperimentSpec& spec) {
    detail::check_decay_grid(spec.decay_grid);
    const UniverseStats universe = detail::spec_universe(spec);
    const CostParams costs = detail::spec_costs(spec);
    const QuintileConstantSet constants = detail::spec_constants(spec);

    ReportTable table;
    table.columns = {"autocorrelation", "decay", "ir", "ir_adj", "tr"};
    for (double decay : spec.decay_grid) {
        const MetricsRow row =
            theory_row(spec.kind, detail::spec_stats(spec, decay), universe,
                       costs, constants);
        table.rows.push_back({detail::fmt_num(row.rho),
                              detail::fmt_num(row.decay),
                              detail::fmt_num(row.ir),
                              detail::fmt_num(row.ir_adj),
                              detail::fmt_num(row.tr)});
    }
    detail::base_metadata(spec, "theory", table);
    return table;
}

inline ReportTable cmd_simulate(const ExperimentSpec& spec) {
    detail::check_decay_grid(spec.decay_grid);
    const double cells = static_cast<double>(spec.decay_grid.size()) *
                         static_cast<double>(spec.reps) *
                         static_cast<double>(spec.n) *
                         static_cast<double>(spec.periods);
    if (cells > spec.max_cells)
        throw ResourceLimitError(
            "requested " + detail::fmt_num(cells) +
            " simulation cells exceeds the cap of " +
            detail::fmt_num(spec.max_cells) +
            " (grid x reps x n x periods); lower the load or raise "
            "--max-cells");

    const UniverseStats universe = detail::spec_universe(spec);
    const CostParams costs = detail::spec_costs(spec);
    const QuintileConstantSet constants = detail::spec_constants(spec);
    const LogNormalVolModel vols(spec.vol_log_mean, spec.vol_log_sd);

    ReportTable table;
    table.columns = {"autocorrelation", "decay",      "ir",
                     "ir_adj",          "tr",         "ir_sim",
                     "ir_adj_sim",      "tr_sim",     "ir_se",
                     "ir_adj_se",       "tr_se",      "reps",
                     "seed"};
    std::uint64_t row_seed = spec.seed;
    for (double decay : spec.decay_grid) {
        const SignalStats stats = detail::spec_stats(spec, decay);
        const MetricsRow theory =
            theory_row(spec.kind, stats, universe, costs, constants);
        const SimulationConfig config(stats, vols, costs, spec.kind, row_seed,
                                      spec.reps, spec.periods, spec.n);
        const SimResult sim = run_experiment(config, spec.workers);
        table.rows.push_back(
            {detail::fmt_num(theory.rho), detail::fmt_num(theory.decay),
             detail::fmt_num(theory.ir), detail::fmt_num(theory.ir_adj),
             detail::fmt_num(theory.tr), detail::fmt_num(sim.ir_mean),
             detail::fmt_num(sim.ir_adj_mean), detail::fmt_num(sim.tr_mean),
             detail::fmt_num(sim.ir_se), detail::fmt_num(sim.ir_adj_se),
             detail::fmt_num(sim.tr_se), detail::fmt_count(sim.reps_used),
             detail::fmt_count(row_seed)});
        ++row_seed;
    }
    detail::base_metadata(spec, "simulate", table);
    table.metadata.emplace_back("periods", detail::fmt_count(spec.periods));
    table.metadata.emplace_back("reps", detail::fmt_count(spec.reps));
    table.metadata.emplace_back("seed", detail::fmt_count(spec.seed));
    return table;
}

namespace detail {

// Shared blend-objective plumbing for sweep and optimize.
struct BlendProblem {
    std::function<double(double)> objective;
    double lo;
    double hi;
    const char* param;
};

inline BlendProblem blend_problem(const ExperimentSpec& spec) {
    if (spec.decay_grid.size() != 1)
        throw UsageError("blend commands need a single --decay value");
    check_decay_grid(spec.decay_grid);
    const double decay = spec.decay_grid.front();
    const SignalStats stats = spec_stats(spec, decay);
    const UniverseStats universe = spec_universe(spec);
    const CostParams costs = spec_costs(spec);
    const QuintileConstantSet constants = spec_constants(spec);
    const PortfolioKind kind = spec.kind;

    if (spec.blend == BlendType::one_lag) {
        return {[=](double w1) {
                    return ir_adj_one_lag(OneLagBlend(w1), stats, universe,
                                          costs, kind, constants);
                },
                0.0, 1.0, "w1"};
    }
    auto objective = [=](double lam) {
        return kind == PortfolioKind::mean_variance
                   ? ir_adj_mv_ewma(EwmaBlend(lam), stats, universe, costs)
                   : ir_adj_quintile_ewma(EwmaBlend(lam), stats, universe,
                                          costs, constants);
    };
    return {objective, 0.0, 0.9999, "lambda"};
}

}  // namespace detail

inline ReportTable cmd_sweep(const ExperimentSpec& spec) {
    if (spec.grid_points < 2) throw UsageError("need at least 2 grid points");
    const detail::BlendProblem problem = detail::blend_problem(spec);

    ReportTable table;
    table.columns = {"param", "ir_adj"};
    for (std::size_t i = 0; i < spec.grid_points; ++i) {
        const double x = problem.lo + (problem.hi - problem.lo) * i /
                                          (spec.grid_points - 1);
        table.rows.push_back(
            {detail::fmt_num(x), detail::fmt_num(problem.objective(x))});
    }
    detail::base_metadata(spec, "sweep", table);
    table.metadata.emplace_back("blend",
                                detail::quoted(detail::blend_name(spec.blend)));
    table.metadata.emplace_back("param", detail::quoted(problem.param));
    table.metadata.emplace_back("decay",
                                detail::fmt_num(spec.decay_grid.front()));
    return table;
}

inline ReportTable cmd_optimize(const ExperimentSpec& spec) {
    if (spec.grid_points < 2) throw UsageError("need at least 2 grid points");
    const detail::BlendProblem problem = detail::blend_problem(spec);
    const OptimizationResult best =
        optimize_blend(problem.objective, problem.lo, problem.hi);

    ReportTable table;
    table.columns = {"param", "ir_adj", "is_optimum"};
    for (std::size_t i = 0; i < spec.grid_points; ++i) {
        const double x = problem.lo + (problem.hi - problem.lo) * i /
                                          (spec.grid_points - 1);
        table.rows.push_back({detail::fmt_num(x),
                              detail::fmt_num(problem.objective(x)), "0"});
    }
    table.rows.push_back({detail::fmt_num(best.argmax),
                          detail::fmt_num(best.max_value), "1"});
    detail::base_metadata(spec, "optimize", table);
    table.metadata.emplace_back("blend",
                                detail::quoted(detail::blend_name(spec.blend)));
    table.metadata.emplace_back("param", detail::quoted(problem.param));
    table.metadata.emplace_back("decay",
                                detail::fmt_num(spec.decay_grid.front()));
    table.metadata.emplace_back("argmax", detail::fmt_num(best.argmax));
    table.metadata.emplace_back("max_value", detail::fmt_num(best.max_value));
    table.metadata.emplace_back("interior", best.interior ? "true" : "false");
    return table;
}

inline ReportTable cmd_crossover(const ExperimentSpec& spec) {
    detail::check_decay_grid(spec.decay_grid);
    const UniverseStats universe = detail::spec_universe(spec);
    const CostParams costs = detail::spec_costs(spec);
    const QuintileConstantSet constants = detail::spec_constants(spec);

    ReportTable table;
    table.columns = {"decay", "ir_adj_mv", "ir_adj_quintile", "quintile_tr",
                     "is_crossover"};
    auto emit = [&](double decay, const char* flag) {
        const SignalStats stats = detail::spec_stats(spec, decay);
        table.rows.push_back(
            {detail::fmt_num(decay),
             detail::fmt_num(ir_adj_mv(stats, universe, costs)),
             detail::fmt_num(
                 ir_adj_quintile(stats, universe, costs, constants)),
             detail::fmt_num(quintile_turnover(Correlation(stats.rho()))),
             flag});
    };
    for (double decay : spec.decay_grid) emit(decay, "0");

    const auto root = crossover_decay(detail::spec_stats(spec, 0.5), universe,
                                      costs, constants);
    if (root) emit(*root, "1");
    detail::base_metadata(spec, "crossover", table);
    table.metadata.emplace_back("crossover_decay",
                                root ? detail::fmt_num(*root)
                                     : std::string("null"));
    return table;
}

inline ReportTable run_command(const ExperimentSpec& spec) {
    switch (spec.command) {
        case Command::theory: return cmd_theory(spec);
        case Command::simulate: return cmd_simulate(spec);
        case Command::sweep: return cmd_sweep(spec);
        case Command::optimize: return cmd_optimize(spec);
        case Command::crossover: return cmd_crossover(spec);
    }
    throw UsageError("unknown command");
}

inline std::string to_csv(const ReportTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

inline std::string to_json(const ReportTable& table) {
    std::string out = "{\n  \"metadata\": {";
    for (std::size_t i = 0; i < table.metadata.size(); ++i) {
        if (i) out += ',';
        out += "\n    \"" + table.metadata[i].first +
               "\": " + table.metadata[i].second;
    }
    out += "\n  },\n  \"rows\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (r) out += ',';
        out += "\n    {";
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out += ", ";
            const std::string& cell = table.rows[r][c];
            out += "\"" + table.columns[c] +
                   "\": " + (cell == "na" ? "null" : cell);
        }
        out += "}";
    }
    out += "\n  ]\n}\n";
    return out;
}

inline std::string render(const ReportTable& table, OutputFormat format) {
    return format == OutputFormat::csv ? to_csv(table) : to_json(table);
}

}  // namespace tair
