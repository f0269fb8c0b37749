// analytics.hpp
//
// Closed-form information ratios, turnover rates, and turnover-adjusted
// information ratios for mean-variance and quintile long-short portfolios.

#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "tair/stat_kernels.hpp"

namespace tair {

// Alpha-model moments: mean and standard deviation of the per-period IC,
// plus the period-to-period signal autocorrelation. decay = 1 - rho.
class SignalStats {
public:
    SignalStats(double mu_ic, double v_ic, Correlation rho)
        : mu_ic_(mu_ic), v_ic_(v_ic), rho_(rho) {
        detail::require_finite(mu_ic, "mu_ic");
        detail::require_finite(v_ic, "v_ic");
        detail::require(std::fabs(mu_ic) < 1.0, "|mu_ic| must be < 1");
        detail::require(v_ic >= 0.0 && v_ic < 1.0,
                        "v_ic must lie in [0, 1)");
        detail::require(mu_ic * mu_ic + v_ic * v_ic < 1.0,
                        "mu_ic^2 + v_ic^2 must be < 1");
        detail::require(rho.value() >= 0.0,
                        "signal autocorrelation must be non-negative");
    }

    double mu_ic() const noexcept { return mu_ic_; }
    double v_ic() const noexcept { return v_ic_; }
    double rho() const noexcept { return rho_.value(); }
    double decay() const noexcept { return 1.0 - rho_.value(); }

    SignalStats with_rho(Correlation rho) const {
        return SignalStats(mu_ic_, v_ic_, rho);
    }
    // IC moments rescaled by a blend discount factor.
    SignalStats scaled(double ic_scale, Correlation rho) const {
        return SignalStats(mu_ic_ * ic_scale, v_ic_ * ic_scale, rho);
    }

private:
    double mu_ic_;
    double v_ic_;
    Correlation rho_;
};

struct CostParams {
    double tcost;  // one-way proportional cost per unit traded
    double te;     // target tracking error per period

    CostParams(double tcost_, double te_) : tcost(tcost_), te(te_) {
        detail::require_finite(tcost, "tcost");
        detail::require_finite(te, "te");
        detail::require(tcost >= 0.0, "tcost must be non-negative");
        detail::require(te > 0.0, "te must be positive");
    }
};

enum class PortfolioKind { mean_variance, quintile_long_short };

// Coefficients of the quintile-spread formulas. The defaults are the rounded
// constants used throughout the published tables; exact() carries the full
// truncated-normal values for sensitivity work.
struct QuintileConstantSet {
    double spread;  // expected tail mean spread multiplier (top minus bottom)
    double idio;    // coefficient on (v_ic^2 + mu_ic^2) in the 1/N variance term

    static QuintileConstantSet printed() { return {2.8, 7.8}; }
    static QuintileConstantSet exact() {
        const TailMoments tm = truncated_tail_moments(0.8);
        return {2.0 * tm.mean, 10.0 - 10.0 * tm.variance};
    }
};

struct MetricsRow {
    double rho;
    double decay;
    double ir;
    double ir_adj;
    double tr;
};

namespace detail {

inline double mv_denominator(const SignalStats& s, std::size_t n) {
    const double mu2 = s.mu_ic() * s.mu_ic();
    const double v2 = s.v_ic() * s.v_ic();
    return std::sqrt(v2 + (1.0 - mu2 - v2) / static_cast<double>(n));
}

inline double mv_denominator(const SignalStats& s, const UniverseStats& u) {
    return mv_denominator(s, u.n);
}

inline double quintile_denominator(const SignalStats& s,
                                   const UniverseStats& u,
                                   const QuintileConstantSet& c) {
    const double mu2 = s.mu_ic() * s.mu_ic();
    const double v2 = s.v_ic() * s.v_ic();
    return std::sqrt(c.spread * c.spread * v2 * u.e_sigma * u.e_sigma +
                     u.e_sigma_sq * (10.0 - c.idio * (v2 + mu2)) /
                         static_cast<double>(u.n));
}

}  // namespace detail

inline double ir_mv(const SignalStats& stats, const UniverseStats& universe) {
    return stats.mu_ic() / detail::mv_denominator(stats, universe);
}

inline double turnover_mv(const SignalStats& stats,
                          const UniverseStats& universe,
                          const CostParams& costs) {
    return universe.e_inv_sigma * costs.te * std::sqrt(stats.decay()) /
           (std::sqrt(kPi) * detail::mv_denominator(stats, universe));
}

inline double expected_return_mv(const SignalStats& stats,
                                 const UniverseStats& universe,
                                 const CostParams& costs) {
    return ir_mv(stats, universe) * costs.te;
}

inline double ir_adj_mv(const SignalStats& stats,
                        const UniverseStats& universe,
                        const CostParams& costs) {
    const double drag = 2.0 * costs.tcost * universe.e_inv_sigma *
                        std::sqrt(stats.decay() / kPi);
    return (stats.mu_ic() - drag) / detail::mv_denominator(stats, universe);
}

// Active weight of one security in the mean-variance book.
inline double mv_weight(double signal, double sigma_i,
                        const SignalStats& stats,
                        const UniverseStats& universe,
                        const CostParams& costs) {
    detail::require_finite(signal, "signal");
    detail::require_finite(sigma_i, "sigma_i");
    detail::require(sigma_i > 0.0, "sigma_i must be positive");
    return costs.te / detail::mv_denominator(stats, universe) * signal /
           (static_cast<double>(universe.n) * sigma_i);
}

// One-way traded fraction of a quintile long-short book per rebalance,
// from the three rank-migration scenarios.
inline double quintile_turnover(const Correlation& rho) {
    detail::require(rho.value() >= 0.0,
                    "signal autocorrelation must be non-negative");
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double q8 = std_normal_quantile(0.8);
    const double q2 = -q8;
    // Prior period in the bottom quintile, current in the top.
    const double p1 = bvn_rect_prob(-inf, q2, q8, inf, rho);
    // Prior in the middle band, current in the top.
    const double p2 = bvn_rect_prob(q2, q8, q8, inf, rho);
    // Prior in the bottom, current in the middle band.
    const double p3 = bvn_rect_prob(-inf, q2, q2, q8, rho);
    return 5.0 * (2.0 * p1 + p2 + p3);
}

inline double ir_quintile(
    const SignalStats& stats, const UniverseStats& universe,
    const QuintileConstantSet& constants = QuintileConstantSet::printed()) {
    return constants.spread * stats.mu_ic() * universe.e_sigma /
           detail::quintile_denominator(stats, universe, constants);
}

inline double ir_adj_quintile(
    const SignalStats& stats, const UniverseStats& universe,
    const CostParams& costs,
    const QuintileConstantSet& constants = QuintileConstantSet::printed()) {
    const double tr = quintile_turnover(Correlation(stats.rho()));
    return (constants.spread * stats.mu_ic() * universe.e_sigma -
            2.0 * costs.tcost * tr) /
           detail::quintile_denominator(stats, universe, constants);
}

// Decay at which the two turnover-adjusted IR curves intersect, if the
// difference changes sign on (0, 1). Bracketed on a 64-point grid and
// refined by bisection to 1e-6.
inline std::optional<double> crossover_decay(
    const SignalStats& stats, const UniverseStats& universe,
    const CostParams& costs,
    const QuintileConstantSet& constants = QuintileConstantSet::printed()) {
    auto diff = [&](double decay) {
        const SignalStats s = stats.with_rho(Correlation(1.0 - decay));
        return ir_adj_mv(s, universe, costs) -
               ir_adj_quintile(s, universe, costs, constants);
    };

    // Values within noise of zero carry no sign information. Both curves
    // vanish together at decay 0 when mu_ic = 0, and bracketing on the
    // 1e-16 residue there would fabricate a root.
    constexpr double noise = 1e-12;
    constexpr int grid = 64;
    double prev_x = 0.0;
    double prev_f = diff(prev_x);
    for (int i = 1; i <= grid; ++i) {
        const double x = static_cast<double>(i) / grid;
        const double f = diff(x);
        if (std::fabs(f) <= noise) {
            if (std::fabs(prev_f) > noise && x < 1.0) return x;
            prev_x = x;
            prev_f = f;
            continue;
        }
        if ((prev_f < -noise && f > noise) || (prev_f > noise && f < -noise)) {
            double lo = prev_x, hi = x, flo = prev_f;
            while (hi - lo > 1e-6) {
                const double mid = 0.5 * (lo + hi);
                const double fm = diff(mid);
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev_x = x;
        prev_f = f;
    }
    return std::nullopt;
}

// Theoretical table row for one decay level.
inline MetricsRow theory_row(
    PortfolioKind kind, const SignalStats& stats,
    const UniverseStats& universe, const CostParams& costs,
    const QuintileConstantSet& constants = QuintileConstantSet::printed()) {
    MetricsRow row{};
    row.rho = stats.rho();
    row.decay = stats.decay();
    if (kind == PortfolioKind::mean_variance) {
        row.ir = ir_mv(stats, universe);
        row.ir_adj = ir_adj_mv(stats, universe, costs);
        row.tr = turnover_mv(stats, universe, costs);
    } else {
        row.ir = ir_quintile(stats, universe, constants);
        row.ir_adj = ir_adj_quintile(stats, universe, costs, constants);
        row.tr = quintile_turnover(Correlation(stats.rho()));
    }
    return row;
}

}  // namespace tair
