// Unit tests for the closed-form portfolio analytics.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tair/analytics.hpp"

using Catch::Matchers::WithinAbs;
using tair::Correlation;
using tair::CostParams;
using tair::PortfolioKind;
using tair::QuintileConstantSet;
using tair::SignalStats;
using tair::UniverseStats;

namespace {

// Base configuration used by the published reference tables.
const tair::LogNormalVolModel kVolModel(-0.722, 0.306);
const UniverseStats kUniverse = tair::lognormal_universe_stats(kVolModel, 5000);
const SignalStats kStats(0.05, 0.05, Correlation(0.6));
const CostParams kCosts(0.01, 0.05);

SignalStats at_decay(double decay) {
    return kStats.with_rho(Correlation(1.0 - decay));
}

struct TableRow {
    double decay, ir, ir_adj, tr;
};

// Published 3-decimal values alongside high-precision values frozen from an
// independent quadrature implementation.
const TableRow kMvPrinted[] = {
    {0.40, 0.962, 0.666, 0.741}, {0.35, 0.962, 0.685, 0.693},
    {0.30, 0.962, 0.706, 0.641}, {0.25, 0.962, 0.728, 0.586},
    {0.20, 0.962, 0.753, 0.524}, {0.15, 0.962, 0.781, 0.454},
    {0.10, 0.962, 0.814, 0.370}, {0.05, 0.962, 0.858, 0.262},
};
const TableRow kMvFrozen[] = {
    {0.40, 0.962428693, 0.666097733, 0.740827400},
    {0.35, 0.962428693, 0.685236462, 0.692980578},
    {0.30, 0.962428693, 0.705798554, 0.641575348},
    {0.25, 0.962428693, 0.728158499, 0.585675484},
    {0.20, 0.962428693, 0.752891062, 0.523844078},
    {0.15, 0.962428693, 0.780963781, 0.453662279},
    {0.10, 0.962428693, 0.814263213, 0.370413700},
    {0.05, 0.962428693, 0.857659877, 0.261922039},
};
const TableRow kQuintilePrinted[] = {
    {0.40, 0.948, 0.680, 1.008}, {0.35, 0.948, 0.698, 0.942},
    {0.30, 0.948, 0.717, 0.871}, {0.25, 0.948, 0.737, 0.794},
    {0.20, 0.948, 0.759, 0.710}, {0.15, 0.948, 0.785, 0.614},
    {0.10, 0.948, 0.815, 0.501}, {0.05, 0.948, 0.854, 0.354},
};
const TableRow kQuintileFrozen[] = {
    {0.40, 0.948466075, 0.680263550, 1.007653653},
    {0.35, 0.948466075, 0.697819488, 0.941694896},
    {0.30, 0.948466075, 0.716640702, 0.870982421},
    {0.25, 0.948466075, 0.737057416, 0.794275549},
    {0.20, 0.948466075, 0.759579093, 0.709660202},
    {0.15, 0.948466075, 0.785066643, 0.613901882},
    {0.10, 0.948466075, 0.815203555, 0.500675621},
    {0.05, 0.948466075, 0.854345881, 0.353615456},
};

}  // namespace

TEST_CASE("mean-variance reference table reproduces") {
    for (size_t i = 0; i < std::size(kMvPrinted); ++i) {
        const auto row = tair::theory_row(PortfolioKind::mean_variance,
                                          at_decay(kMvPrinted[i].decay),
                                          kUniverse, kCosts);
        INFO("decay=" << kMvPrinted[i].decay);
        REQUIRE_THAT(row.ir, WithinAbs(kMvPrinted[i].ir, 1e-3));
        REQUIRE_THAT(row.ir_adj, WithinAbs(kMvPrinted[i].ir_adj, 1e-3));
        REQUIRE_THAT(row.tr, WithinAbs(kMvPrinted[i].tr, 1e-3));
        REQUIRE_THAT(row.ir, WithinAbs(kMvFrozen[i].ir, 1e-8));
        REQUIRE_THAT(row.ir_adj, WithinAbs(kMvFrozen[i].ir_adj, 1e-8));
        REQUIRE_THAT(row.tr, WithinAbs(kMvFrozen[i].tr, 1e-8));
    }
}

TEST_CASE("quintile reference table reproduces") {
    for (size_t i = 0; i < std::size(kQuintilePrinted); ++i) {
        const auto row = tair::theory_row(PortfolioKind::quintile_long_short,
                                          at_decay(kQuintilePrinted[i].decay),
                                          kUniverse, kCosts);
        INFO("decay=" << kQuintilePrinted[i].decay);
        REQUIRE_THAT(row.ir, WithinAbs(kQuintilePrinted[i].ir, 2e-3));
        REQUIRE_THAT(row.ir_adj, WithinAbs(kQuintilePrinted[i].ir_adj, 2e-3));
        REQUIRE_THAT(row.tr, WithinAbs(kQuintilePrinted[i].tr, 2e-3));
        REQUIRE_THAT(row.ir, WithinAbs(kQuintileFrozen[i].ir, 1e-8));
        REQUIRE_THAT(row.ir_adj, WithinAbs(kQuintileFrozen[i].ir_adj, 1e-8));
        REQUIRE_THAT(row.tr, WithinAbs(kQuintileFrozen[i].tr, 1e-8));
    }
}

TEST_CASE("unadjusted mean-variance ratio") {
    REQUIRE_THAT(tair::ir_mv(kStats, kUniverse),
                 WithinAbs(0.962428692690666, 1e-12));
    SECTION("zero mean IC gives zero ratio") {
        REQUIRE(tair::ir_mv(SignalStats(0.0, 0.05, Correlation(0.6)),
                            kUniverse) == 0.0);
    }
    SECTION("large universes approach the mu/v limit") {
        const UniverseStats huge(1000000000000ull, kUniverse.e_inv_sigma,
                                 kUniverse.e_sigma, kUniverse.e_sigma_sq);
        REQUIRE_THAT(tair::ir_mv(kStats, huge), WithinAbs(1.0, 1e-4));
    }
}

TEST_CASE("expected return scales with tracking error") {
    const double base = tair::expected_return_mv(kStats, kUniverse, kCosts);
    REQUIRE_THAT(base, WithinAbs(tair::ir_mv(kStats, kUniverse) * 0.05,
                                 1e-15));
    const CostParams doubled(0.01, 0.10);
    REQUIRE_THAT(tair::expected_return_mv(kStats, kUniverse, doubled),
                 WithinAbs(2.0 * base, 1e-15));
}

TEST_CASE("turnover adjustment never raises the ratio") {
    std::mt19937_64 rng(7151);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double mu = 0.01 + 0.1 * unif(rng);
        const double v = 0.01 + 0.15 * unif(rng);
        const SignalStats s(mu, v, Correlation(unif(rng)));
        const CostParams c(0.05 * unif(rng), 0.01 + 0.1 * unif(rng));
        REQUIRE(tair::ir_adj_mv(s, kUniverse, c) <=
                tair::ir_mv(s, kUniverse) + 1e-15);
        REQUIRE(tair::ir_adj_quintile(s, kUniverse, c) <=
                tair::ir_quintile(s, kUniverse) + 1e-15);
    }
    SECTION("free trading collapses the adjustment") {
        const CostParams free_trading(0.0, 0.05);
        REQUIRE_THAT(tair::ir_adj_mv(kStats, kUniverse, free_trading),
                     WithinAbs(tair::ir_mv(kStats, kUniverse), 1e-15));
        REQUIRE_THAT(tair::ir_adj_quintile(kStats, kUniverse, free_trading),
                     WithinAbs(tair::ir_quintile(kStats, kUniverse), 1e-15));
    }
}

TEST_CASE("mean-variance turnover properties") {
    SECTION("zero decay trades nothing") {
        REQUIRE(tair::turnover_mv(at_decay(0.0), kUniverse, kCosts) == 0.0);
    }
    SECTION("strictly increasing in decay") {
        double prev = -1.0;
        for (double d = 0.0; d <= 1.0; d += 0.05) {
            const double tr = tair::turnover_mv(at_decay(d), kUniverse, kCosts);
            REQUIRE(tr > prev);
            prev = tr;
        }
    }
}

TEST_CASE("mean-variance weight") {
    REQUIRE(tair::mv_weight(0.0, 0.509, kStats, kUniverse, kCosts) == 0.0);
    const double w = tair::mv_weight(1.0, 0.509, kStats, kUniverse, kCosts);
    REQUIRE_THAT(w, WithinAbs(3.7816451579201024e-4, 1e-15));
    REQUIRE(tair::mv_weight(-1.0, 0.509, kStats, kUniverse, kCosts) == -w);
    REQUIRE_THROWS_AS(tair::mv_weight(1.0, 0.0, kStats, kUniverse, kCosts),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(tair::mv_weight(1.0, -0.2, kStats, kUniverse, kCosts),
                      std::invalid_argument);
}

TEST_CASE("quintile turnover") {
    SECTION("no rank migration at unit autocorrelation") {
        REQUIRE(tair::quintile_turnover(Correlation(1.0)) == 0.0);
    }
    SECTION("independence gives exactly 1.6") {
        REQUIRE_THAT(tair::quintile_turnover(Correlation(0.0)),
                     WithinAbs(1.6, 1e-12));
    }
    SECTION("strictly decreasing in autocorrelation") {
        double prev = 2.0;
        for (double r = 0.0; r < 1.0001; r += 0.05) {
            const double tr =
                tair::quintile_turnover(Correlation(std::min(r, 1.0)));
            REQUIRE(tr < prev);
            prev = tr;
        }
    }
    SECTION("negative autocorrelation is out of scope") {
        REQUIRE_THROWS_AS(tair::quintile_turnover(Correlation(-0.1)),
                          std::invalid_argument);
    }
}

TEST_CASE("quintile ratio sits below the mean-variance ratio") {
    std::mt19937_64 rng(40213);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const SignalStats s(0.01 + 0.1 * unif(rng), 0.01 + 0.15 * unif(rng),
                            Correlation(unif(rng)));
        const tair::LogNormalVolModel vols(-1.5 + unif(rng),
                                           0.1 + 0.5 * unif(rng));
        const auto u = tair::lognormal_universe_stats(
            vols, 100 + static_cast<size_t>(unif(rng) * 10000));
        REQUIRE(tair::ir_quintile(s, u) < tair::ir_mv(s, u));
    }
}

TEST_CASE("exact-constant variant stays close to the rounded one") {
    const auto exact = QuintileConstantSet::exact();
    REQUIRE_THAT(exact.spread, WithinAbs(2.799619204078083, 1e-12));
    REQUIRE_THAT(exact.idio, WithinAbs(7.813574379253916, 1e-12));
    REQUIRE_THAT(tair::ir_quintile(kStats, kUniverse, exact),
                 WithinAbs(0.9484534454551677, 1e-10));
    REQUIRE_THAT(tair::ir_quintile(kStats, kUniverse, exact),
                 WithinAbs(tair::ir_quintile(kStats, kUniverse), 5e-4));
}

TEST_CASE("turnover-adjusted curves cross near decay 0.09") {
    const auto root = tair::crossover_decay(kStats, kUniverse, kCosts);
    REQUIRE(root.has_value());
    REQUIRE_THAT(*root, WithinAbs(0.0873170452824, 2e-6));

    // Mean-variance wins below the crossover, quintile above.
    const SignalStats below = at_decay(*root - 0.03);
    const SignalStats above = at_decay(*root + 0.03);
    REQUIRE(tair::ir_adj_mv(below, kUniverse, kCosts) >
            tair::ir_adj_quintile(below, kUniverse, kCosts));
    REQUIRE(tair::ir_adj_mv(above, kUniverse, kCosts) <
            tair::ir_adj_quintile(above, kUniverse, kCosts));

    SECTION("no crossing reported when the sign never flips") {
        const SignalStats dead(0.0, 0.05, Correlation(0.6));
        REQUIRE_FALSE(tair::crossover_decay(dead, kUniverse, kCosts)
                          .has_value());
    }
}

TEST_CASE("signal stats validation") {
    REQUIRE_THROWS_AS(SignalStats(0.8, 0.7, Correlation(0.5)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(SignalStats(0.05, 1.0, Correlation(0.5)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(SignalStats(1.0, 0.05, Correlation(0.5)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(SignalStats(0.05, -0.01, Correlation(0.5)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(SignalStats(0.05, 0.05, Correlation(-0.2)),
                      std::invalid_argument);
    const SignalStats ok(0.05, 0.05, Correlation(0.6));
    REQUIRE_THAT(ok.decay(), WithinAbs(0.4, 1e-15));
}

TEST_CASE("cost params validation") {
    REQUIRE_THROWS_AS(CostParams(-0.01, 0.05), std::invalid_argument);
    REQUIRE_THROWS_AS(CostParams(0.01, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(CostParams(0.01, -0.05), std::invalid_argument);
    REQUIRE(CostParams(0.0, 0.05).tcost == 0.0);
}
