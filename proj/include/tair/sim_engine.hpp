// sim_engine.hpp
//
// Monte Carlo verification engine. Each repetition simulates an IC series,
// a fixed cross-section of specific volatilities, an AR(1) alpha-signal
// panel, realized returns, and portfolio weights, then measures IR, net IR
// and turnover across periods. Repetitions use independent counter-derived
// random streams, so results are deterministic for a given seed regardless
// of how many worker threads run them.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "tair/analytics.hpp"
#include "tair/stat_kernels.hpp"

namespace tair {

struct SimulationConfig {
    SignalStats stats;
    LogNormalVolModel vol_model;
    CostParams costs;
    PortfolioKind kind;
    std::uint64_t seed;
    std::size_t reps;
    std::size_t periods;
    std::size_t n;

    SimulationConfig(SignalStats stats_, LogNormalVolModel vol_model_,
                     CostParams costs_, PortfolioKind kind_,
                     std::uint64_t seed_, std::size_t reps_ = 1000,
                     std::size_t periods_ = 600, std::size_t n_ = 5000)
        : stats(stats_),
          vol_model(vol_model_),
          costs(costs_),
          kind(kind_),
          seed(seed_),
          reps(reps_),
          periods(periods_),
          n(n_) {
        detail::require(periods >= 2, "periods must be >= 2");
        detail::require(reps >= 1, "reps must be >= 1");
        detail::require(n >= 10, "universe must contain at least 10 securities");
    }
};

// One repetition's working set. Panels are column-major with one column per
// period; signals and weights carry an extra leading column for t = 0.
struct PanelState {
    std::size_t n = 0;
    std::size_t periods = 0;
    std::vector<double> ic_series;  // periods
    std::vector<double> vols;       // n
    std::vector<double> signals;    // n x (periods + 1)
    std::vector<double> returns;    // n x periods
    std::vector<double> weights;    // n x (periods + 1)
};

struct PeriodSeries {
    std::vector<double> gross;
    std::vector<double> net;
    std::vector<double> turnover;
};

struct SimResult {
    double ir_mean = 0.0;
    double ir_adj_mean = 0.0;
    double tr_mean = 0.0;
    // Standard errors across repetitions; NaN when fewer than two usable reps.
    double ir_se = 0.0;
    double ir_adj_se = 0.0;
    double tr_se = 0.0;
    std::size_t reps_used = 0;
    std::size_t reps_excluded = 0;        // zero-variance repetitions dropped
    std::size_t ic_floor_events = 0;      // periods with |IC_t| > 1
    std::size_t ir_adj_exceed_count = 0;  // reps where net IR beat gross IR
};

// Stream for repetition `rep`: the (seed, rep) pair is mixed through the
// SplitMix64 finalizer and the result seeds a Mersenne Twister. Streams are
// order-insensitive, so repetitions can run on any worker.
inline std::mt19937_64 make_rep_stream(std::uint64_t seed, std::uint64_t rep) {
    std::uint64_t z = seed + (rep + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return std::mt19937_64(z);
}

inline std::vector<double> gen_ic_series(const SignalStats& stats,
                                         std::size_t periods,
                                         std::mt19937_64& stream) {
    detail::require(periods >= 1, "periods must be >= 1");
    std::normal_distribution<double> normal(stats.mu_ic(), stats.v_ic());
    std::vector<double> ic(periods);
    if (stats.v_ic() == 0.0) {
        std::fill(ic.begin(), ic.end(), stats.mu_ic());
        return ic;
    }
    for (double& v : ic) v = normal(stream);
    return ic;
}

inline std::vector<double> gen_universe_vols(const LogNormalVolModel& model,
                                             std::size_t n,
                                             std::mt19937_64& stream) {
    detail::require(n >= 1, "n must be >= 1");
    std::normal_distribution<double> normal(model.log_mean, model.log_sd);
    std::vector<double> vols(n);
    for (double& v : vols) v = std::exp(normal(stream));
    return vols;
}

// AR(1) panel with standard normal marginals: column 0 is drawn fresh and
// each later column is rho * previous + innovation of variance 1 - rho^2.
inline std::vector<double> gen_signal_panel(std::size_t n,
                                            std::size_t periods,
                                            const Correlation& rho,
                                            std::mt19937_64& stream) {
    detail::require(rho.value() >= 0.0,
                    "signal autocorrelation must be non-negative");
    const double p = rho.value();
    const double innovation_sd = std::sqrt(std::max(0.0, 1.0 - p * p));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> panel(n * (periods + 1));
    for (std::size_t i = 0; i < n; ++i) panel[i] = normal(stream);
    for (std::size_t t = 1; t <= periods; ++t) {
        const double* prev = panel.data() + (t - 1) * n;
        double* cur = panel.data() + t * n;
        if (innovation_sd == 0.0) {
            std::copy(prev, prev + n, cur);
            continue;
        }
        for (std::size_t i = 0; i < n; ++i)
            cur[i] = p * prev[i] + innovation_sd * normal(stream);
    }
    return panel;
}

// Realized returns r = sigma * (IC_t * x + eps), eps variance 1 - IC_t^2
// floored at zero; returns the number of floored periods.
inline std::size_t gen_returns(PanelState& panel, std::mt19937_64& stream) {
    const std::size_t n = panel.n, periods = panel.periods;
    panel.returns.assign(n * periods, 0.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t floored = 0;
    for (std::size_t t = 1; t <= periods; ++t) {
        const double ic = panel.ic_series[t - 1];
        double eps_var = 1.0 - ic * ic;
        if (eps_var < 0.0) {
            eps_var = 0.0;
            ++floored;
        }
        const double eps_sd = std::sqrt(eps_var);
        const double* x = panel.signals.data() + t * n;
        double* r = panel.returns.data() + (t - 1) * n;
        for (std::size_t i = 0; i < n; ++i)
            r[i] = panel.vols[i] * (ic * x[i] + eps_sd * normal(stream));
    }
    return floored;
}

namespace detail {

inline void quintile_column(const double* signals, std::size_t n,
                            double* weights,
                            std::vector<std::pair<double, std::size_t>>& buf) {
    const std::size_t q = n / 5;
    buf.clear();
    for (std::size_t i = 0; i < n; ++i) buf.emplace_back(signals[i], i);
    std::nth_element(buf.begin(), buf.begin() + q, buf.end());
    std::nth_element(buf.begin() + q, buf.begin() + (n - q), buf.end());
    std::fill(weights, weights + n, 0.0);
    const double w = 5.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < q; ++j) weights[buf[j].second] = -w;
    for (std::size_t j = n - q; j < n; ++j) weights[buf[j].second] = w;
}

}  // namespace detail

// Weights for every column including t = 0, which seeds the first
// rebalance's turnover.
inline void build_weights(PanelState& panel, const SimulationConfig& config) {
    const std::size_t n = panel.n, periods = panel.periods;
    panel.weights.assign(n * (periods + 1), 0.0);
    if (config.kind == PortfolioKind::mean_variance) {
        const double scalar = config.costs.te /
                              detail::mv_denominator(config.stats, n) /
                              static_cast<double>(n);
        for (std::size_t t = 0; t <= periods; ++t) {
            const double* x = panel.signals.data() + t * n;
            double* w = panel.weights.data() + t * n;
            for (std::size_t i = 0; i < n; ++i)
                w[i] = scalar * x[i] / panel.vols[i];
        }
    } else {
        std::vector<std::pair<double, std::size_t>> buf;
        buf.reserve(n);
        for (std::size_t t = 0; t <= periods; ++t) {
            detail::quintile_column(panel.signals.data() + t * n, n,
                                    panel.weights.data() + t * n, buf);
        }
    }
}

inline PeriodSeries portfolio_metrics(const PanelState& panel,
                                      const CostParams& costs) {
    const std::size_t n = panel.n, periods = panel.periods;
    PeriodSeries series;
    series.gross.resize(periods);
    series.net.resize(periods);
    series.turnover.resize(periods);
    for (std::size_t t = 1; t <= periods; ++t) {
        const double* w = panel.weights.data() + t * n;
        const double* w_prev = panel.weights.data() + (t - 1) * n;
        const double* r = panel.returns.data() + (t - 1) * n;
        double gross = 0.0, traded = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            gross += w[i] * r[i];
            traded += std::fabs(w[i] - w_prev[i]);
        }
        series.gross[t - 1] = gross;
        series.net[t - 1] = gross - costs.tcost * traded;
        series.turnover[t - 1] = 0.5 * traded;
    }
    return series;
}

namespace detail {

struct RepMetrics {
    double ir = 0.0;
    double ir_adj = 0.0;
    double tr = 0.0;
    bool usable = false;
    std::size_t ic_floor_events = 0;
};

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline RepMetrics run_rep(const SimulationConfig& config, std::uint64_t rep) {
    std::mt19937_64 stream = make_rep_stream(config.seed, rep);
    PanelState panel;
    panel.n = config.n;
    panel.periods = config.periods;
    panel.ic_series = gen_ic_series(config.stats, config.periods, stream);
    panel.vols = gen_universe_vols(config.vol_model, config.n, stream);
    panel.signals =
        gen_signal_panel(config.n, config.periods,
                         Correlation(config.stats.rho()), stream);
    RepMetrics metrics;
    metrics.ic_floor_events = gen_returns(panel, stream);
    build_weights(panel, config);
    const PeriodSeries series = portfolio_metrics(panel, config.costs);

    const double gross_mean = mean_of(series.gross);
    const double gross_sd = sample_sd(series.gross, gross_mean);
    const double net_mean = mean_of(series.net);
    const double net_sd = sample_sd(series.net, net_mean);
    if (gross_sd <= 0.0 || net_sd <= 0.0) return metrics;
    metrics.ir = gross_mean / gross_sd;
    metrics.ir_adj = net_mean / net_sd;
    metrics.tr = mean_of(series.turnover);
    metrics.usable = true;
    return metrics;
}

}  // namespace detail

// Runs all repetitions, concurrently when workers > 1 (0 picks the hardware
// count), and aggregates in repetition order.
inline SimResult run_experiment(const SimulationConfig& config,
                                unsigned workers = 0) {
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, config.reps));

    std::vector<detail::RepMetrics> reps(config.reps);
    if (workers <= 1) {
        for (std::size_t r = 0; r < config.reps; ++r)
            reps[r] = detail::run_rep(config, r);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t r = next.fetch_add(1);
                if (r >= config.reps) return;
                reps[r] = detail::run_rep(config, r);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SimResult result;
    std::vector<double> irs, ir_adjs, trs;
    irs.reserve(config.reps);
    ir_adjs.reserve(config.reps);
    trs.reserve(config.reps);
    for (const auto& m : reps) {
        result.ic_floor_events += m.ic_floor_events;
        if (!m.usable) {
            ++result.reps_excluded;
            continue;
        }
        if (m.ir_adj > m.ir) ++result.ir_adj_exceed_count;
        irs.push_back(m.ir);
        ir_adjs.push_back(m.ir_adj);
        trs.push_back(m.tr);
    }
    result.reps_used = irs.size();
    if (result.reps_used == 0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        result.ir_mean = result.ir_adj_mean = result.tr_mean = nan;
        result.ir_se = result.ir_adj_se = result.tr_se = nan;
        return result;
    }
    result.ir_mean = detail::mean_of(irs);
    result.ir_adj_mean = detail::mean_of(ir_adjs);
    result.tr_mean = detail::mean_of(trs);
    if (result.reps_used >= 2) {
        const double root = std::sqrt(static_cast<double>(result.reps_used));
        result.ir_se = detail::sample_sd(irs, result.ir_mean) / root;
        result.ir_adj_se = detail::sample_sd(ir_adjs, result.ir_adj_mean) / root;
        result.tr_se = detail::sample_sd(trs, result.tr_mean) / root;
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        result.ir_se = result.ir_adj_se = result.tr_se = nan;
    }
    return result;
}

}  // namespace tair
