// integrated_signals.hpp
//
// Blended alpha-signal analytics: one-lag weighted averages and EWMA
// combinations of an AR(1) signal, the IC discount and autocorrelation they
// induce, the resulting turnover-adjusted information ratios, and a scalar
// maximizer for the blend parameter.

#pragma once

#include <cmath>
#include <functional>

#include "tair/analytics.hpp"
#include "tair/stat_kernels.hpp"

namespace tair {

// A_t = w1 * x_t + w2 * x_{t-1}, weights summing to one.
class OneLagBlend {
public:
    explicit OneLagBlend(double w1) : w1_(w1) {
        detail::require_finite(w1, "w1");
        detail::require(w1 >= 0.0 && w1 <= 1.0, "w1 must lie in [0, 1]");
    }
    double w1() const noexcept { return w1_; }
    double w2() const noexcept { return 1.0 - w1_; }

private:
    double w1_;
};

// A_t = sum_j (1 - lambda) * lambda^j * x_{t-j}.
class EwmaBlend {
public:
    explicit EwmaBlend(double lambda) : lambda_(lambda) {
        detail::require_finite(lambda, "lambda");
        detail::require(lambda >= 0.0 && lambda < 1.0,
                        "lambda must lie in [0, 1)");
    }
    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

struct OptimizationResult {
    double argmax;
    double max_value;
    bool interior;  // argmax strictly inside the search interval
};

// IC discount factor of the one-lag blend relative to the raw signal.
inline double one_lag_ic_scale(const OneLagBlend& blend,
                               const Correlation& rho) {
    const double w1 = blend.w1(), w2 = blend.w2(), p = rho.value();
    return (w1 + w2 * p) /
           std::sqrt(w1 * w1 + 2.0 * w1 * w2 * p + w2 * w2);
}

// Lag-1 autocorrelation of the one-lag blend of an AR(1) signal.
inline Correlation one_lag_autocorr(const OneLagBlend& blend,
                                    const Correlation& rho) {
    const double w1 = blend.w1(), w2 = blend.w2(), p = rho.value();
    const double num =
        w1 * w1 * p + w1 * w2 * p * p + w1 * w2 + w2 * w2 * p;
    return Correlation(num / (w1 * w1 + 2.0 * w1 * w2 * p + w2 * w2));
}

inline double ir_adj_one_lag(
    const OneLagBlend& blend, const SignalStats& stats,
    const UniverseStats& universe, const CostParams& costs,
    PortfolioKind kind,
    const QuintileConstantSet& constants = QuintileConstantSet::printed()) {
    const Correlation rho(stats.rho());
    const double s = one_lag_ic_scale(blend, rho);
    const SignalStats blended =
        stats.scaled(s, one_lag_autocorr(blend, rho));
    return kind == PortfolioKind::mean_variance
               ? ir_adj_mv(blended, universe, costs)
               : ir_adj_quintile(blended, universe, costs, constants);
}

// Autocorrelation of the EWMA blend in its published closed form. Exposed
// for reference only: it does not recover rho at lambda = 0, so the IR
// paths below derive the blended decay from the turnover factor instead.
inline double ewma_autocorr_printed(const EwmaBlend& blend,
                                    const Correlation& rho) {
    const double lam = blend.lambda(), p = rho.value();
    return (lam + p) / (1.0 + lam + p);
}

inline double ewma_variance(const EwmaBlend& blend, const Correlation& rho) {
    const double lam = blend.lambda(), p = rho.value();
    detail::require(lam * p < 1.0, "lambda * rho must be < 1");
    return (1.0 - lam) * (1.0 + lam * p) /
           ((1.0 + lam) * (1.0 - lam * p));
}

// IC discount factor of the EWMA blend.
inline double ewma_ic_scale(const EwmaBlend& blend, const Correlation& rho) {
    const double lam = blend.lambda(), p = rho.value();
    detail::require(lam * p < 1.0, "lambda * rho must be < 1");
    return std::sqrt((1.0 - lam * lam) / (1.0 - lam * lam * p * p));
}

// Signal decay implied by the EWMA blend's turnover term; reduces to
// 1 - rho at lambda = 0.
inline double ewma_effective_decay(const EwmaBlend& blend,
                                   const Correlation& rho) {
    const double lam = blend.lambda(), p = rho.value();
    return (1.0 - p) * (1.0 - lam * p) / (1.0 + lam);
}

inline double ir_adj_mv_ewma(const EwmaBlend& blend,
                             const SignalStats& stats,
                             const UniverseStats& universe,
                             const CostParams& costs) {
    const double lam = blend.lambda(), p = stats.rho();
    const double mu = stats.mu_ic(), v = stats.v_ic();
    const double n = static_cast<double>(universe.n);
    const double drag = 2.0 * costs.tcost * universe.e_inv_sigma *
                        std::sqrt((1.0 - p) / kPi) *
                        std::sqrt((1.0 - lam * p) / (1.0 + lam));
    const double den =
        std::sqrt(v * v - (mu * mu + v * v) / n +
                  (1.0 - lam * lam * p * p) / (n * (1.0 - lam * lam)));
    return (mu - drag) / den;
}

inline double ir_adj_quintile_ewma(
    const EwmaBlend& blend, const SignalStats& stats,
    const UniverseStats& universe, const CostParams& costs,
    const QuintileConstantSet& constants = QuintileConstantSet::printed()) {
    const Correlation rho(stats.rho());
    const double s = ewma_ic_scale(blend, rho);
    const double decay = ewma_effective_decay(blend, rho);
    const SignalStats blended = stats.scaled(s, Correlation(1.0 - decay));
    return ir_adj_quintile(blended, universe, costs, constants);
}

// Numerator of d(ir_adj_mv_ewma)/d lambda; shares its sign with the
// derivative everywhere on (0, 1).
inline double eq20_derivative_numerator(const EwmaBlend& blend,
                                        const SignalStats& stats,
                                        const UniverseStats& universe,
                                        const CostParams& costs) {
    const double x = blend.lambda();
    detail::require(x > 0.0 && x < 1.0,
                    "derivative defined on the open interval only");
    const double p = stats.rho();
    const double mu = stats.mu_ic(), v = stats.v_ic();
    const double n = static_cast<double>(universe.n);
    const double k = v * v - (mu * mu + v * v) / n;
    const double m = 2.0 * costs.tcost * universe.e_inv_sigma /
                     std::sqrt(kPi);
    const double s = 1.0 - x * x * p * p + k * n * (1.0 - x * x);
    const double ratio_den = std::sqrt(s / (n * (1.0 - x * x)));
    const double first = m * (1.0 + p) * std::sqrt(1.0 - p) /
                         (2.0 * (1.0 + x) * std::sqrt(1.0 + x) *
                          std::sqrt(1.0 - x * p)) *
                         ratio_den;
    const double second =
        x * (1.0 - p * p) / std::sqrt(s) *
        (mu - m * std::sqrt(1.0 - p) * std::sqrt(1.0 - x * p) /
                  std::sqrt(1.0 + x)) /
        (std::sqrt(n) * (1.0 - x * x) * std::sqrt(1.0 - x * x));
    return first - second;
}

inline int eq20_derivative_sign(const EwmaBlend& blend,
                                const SignalStats& stats,
                                const UniverseStats& universe,
                                const CostParams& costs) {
    const double num =
        eq20_derivative_numerator(blend, stats, universe, costs);
    return (num > 0.0) - (num < 0.0);
}

// Maximize a scalar objective on [lo, hi]: 1024-interval grid scan, then
// golden-section refinement of the best bracket to 1e-6. Ties resolve to
// the lowest parameter value; endpoint maxima are flagged non-interior.
inline OptimizationResult optimize_blend(
    const std::function<double(double)>& objective, double lo, double hi) {
    detail::require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
                    "invalid search interval");
    constexpr int grid = 1024;
    constexpr double tol = 1e-6;

    int best = 0;
    double best_val = objective(lo);
    for (int i = 1; i <= grid; ++i) {
        const double x = lo + (hi - lo) * i / grid;
        const double val = objective(x);
        if (val > best_val) {
            best = i;
            best_val = val;
        }
    }

    double a = lo + (hi - lo) * std::max(0, best - 1) / grid;
    double b = lo + (hi - lo) * std::min(grid, best + 1) / grid;
    constexpr double gr = 0.6180339887498949;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = objective(d);
        }
    }
    const double refined = 0.5 * (a + b);

    OptimizationResult result{lo, objective(lo), false};
    const double candidates[] = {lo + (hi - lo) * best / grid, refined, hi};
    for (double x : candidates) {
        const double val = objective(x);
        if (val > result.max_value ||
            (val == result.max_value && x < result.argmax)) {
            result.argmax = x;
            result.max_value = val;
        }
    }
    result.interior = result.argmax > lo && result.argmax < hi;
    return result;
}

}  // namespace tair
