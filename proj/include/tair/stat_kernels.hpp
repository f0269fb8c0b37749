// stat_kernels.hpp
//
// Univariate and bivariate normal primitives, truncated-normal tail moments,
// and log-normal cross-sectional volatility moments. Everything here is a
// pure function; all inputs are validated and violations throw
// std::invalid_argument.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace tair {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSqrtTwoPi = 2.506628274631000502415765284811045253;
inline constexpr double kInvSqrtTwoPi = 0.398942280401432677939946059934381868;

namespace detail {

inline void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

inline void require_finite(double x, const char* name) {
    if (!std::isfinite(x))
        throw std::invalid_argument(std::string(name) + " must be finite");
}

}  // namespace detail

// Period-to-period correlation of a signal (or any correlation coefficient).
class Correlation {
public:
    explicit Correlation(double value) : value_(value) {
        detail::require_finite(value, "correlation");
        detail::require(value >= -1.0 && value <= 1.0,
                        "correlation must lie in [-1, 1]");
    }
    double value() const noexcept { return value_; }

private:
    double value_;
};

// log(sigma_i) ~ Normal(log_mean, log_sd), sigma_i being per-security
// specific volatility.
struct LogNormalVolModel {
    double log_mean;
    double log_sd;  // > 0

    LogNormalVolModel(double log_mean_, double log_sd_)
        : log_mean(log_mean_), log_sd(log_sd_) {
        detail::require_finite(log_mean, "log_mean");
        detail::require_finite(log_sd, "log_sd");
        detail::require(log_sd > 0.0, "log_sd must be positive");
    }
};

// Cross-sectional moments of the volatility distribution over a universe of
// n securities: E_cs(1/sigma), E_cs(sigma), E_cs(sigma^2).
struct UniverseStats {
    std::size_t n;
    double e_inv_sigma;
    double e_sigma;
    double e_sigma_sq;

    UniverseStats(std::size_t n_, double e_inv_sigma_, double e_sigma_,
                  double e_sigma_sq_)
        : n(n_),
          e_inv_sigma(e_inv_sigma_),
          e_sigma(e_sigma_),
          e_sigma_sq(e_sigma_sq_) {
        detail::require(n >= 2, "universe must contain at least 2 securities");
        detail::require(e_inv_sigma > 0.0 && e_sigma > 0.0 && e_sigma_sq > 0.0,
                        "volatility moments must be positive");
        // Jensen: E(sigma^2) >= E(sigma)^2.
        detail::require(e_sigma_sq >= e_sigma * e_sigma,
                        "E(sigma^2) must be >= E(sigma)^2");
    }
};

inline double std_normal_pdf(double x) {
    detail::require_finite(x, "x");
    return kInvSqrtTwoPi * std::exp(-0.5 * x * x);
}

inline double std_normal_cdf(double x) {
    detail::require_finite(x, "x");
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

// Inverse standard normal CDF. Acklam's rational approximation refined by a
// single Halley step against the erfc-based CDF; |cdf(result) - p| stays
// below 1e-15 over (0, 1).
inline double std_normal_quantile(double p) {
    detail::require_finite(p, "p");
    detail::require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");

    static constexpr double a[6] = {
        -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
        1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {
        -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
        6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[6] = {
        -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
        -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {
        7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
        3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley step.
    double e = std_normal_cdf(x) - p;
    double u = e * kSqrtTwoPi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

namespace detail {

// P(X > h, Y > k) for a standard bivariate normal with correlation r.
// Drezner-Wesolowsky reduction to a one-dimensional integral over the
// correlation parameter with Gauss-Legendre quadrature, following Genz's
// refinement for |r| close to 1. Absolute accuracy ~5e-16.
inline double bvn_upper_tail(double h, double k, double r) {
    static constexpr double w6[3] = {0.1713244923791705, 0.3607615730481384,
                                     0.4679139345726904};
    static constexpr double x6[3] = {-0.9324695142031522, -0.6612093864662647,
                                     -0.2386191860831970};
    static constexpr double w12[6] = {0.04717533638651177, 0.1069393259953183,
                                      0.1600783285433464,  0.2031674267230659,
                                      0.2334925365383547,  0.2491470458134029};
    static constexpr double x12[6] = {-0.9815606342467191, -0.9041172563704750,
                                      -0.7699026741943050, -0.5873179542866171,
                                      -0.3678314989981802, -0.1252334085114692};
    static constexpr double w20[10] = {
        0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
        0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
        0.1316886384491766,  0.1420961093183820,  0.1491729864726037,
        0.1527533871307258};
    static constexpr double x20[10] = {
        -0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
        -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
        -0.5108670019508271, -0.3737060887154195, -0.2277858511416451,
        -0.07652652113349733};

    const double* w;
    const double* xg;
    int lg;
    const double ar = std::fabs(r);
    if (ar < 0.3) {
        w = w6; xg = x6; lg = 3;
    } else if (ar < 0.75) {
        w = w12; xg = x12; lg = 6;
    } else {
        w = w20; xg = x20; lg = 10;
    }

    double hk = h * k;
    double bvn = 0.0;
    if (ar < 0.925) {
        const double hs = 0.5 * (h * h + k * k);
        const double asr = std::asin(r);
        for (int i = 0; i < lg; ++i) {
            double sn = std::sin(asr * (xg[i] + 1.0) / 2.0);
            bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            sn = std::sin(asr * (-xg[i] + 1.0) / 2.0);
            bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
        bvn = bvn * asr / (2.0 * kTwoPi) +
              std_normal_cdf(-h) * std_normal_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (ar < 1.0) {
            const double as = (1.0 - r) * (1.0 + r);
            double a = std::sqrt(as);
            const double bs = (h - k) * (h - k);
            const double cc = (4.0 - hk) / 8.0;
            const double dd = (12.0 - hk) / 16.0;
            double asr = -0.5 * (bs / as + hk);
            if (asr > -100.0) {
                bvn = a * std::exp(asr) *
                      (1.0 - cc * (bs - as) * (1.0 - dd * bs / 5.0) / 3.0 +
                       cc * dd * as * as / 5.0);
            }
            if (-hk < 100.0) {
                const double b = std::sqrt(bs);
                bvn -= std::exp(-0.5 * hk) * kSqrtTwoPi *
                       std_normal_cdf(-b / a) * b *
                       (1.0 - cc * bs * (1.0 - dd * bs / 5.0) / 3.0);
            }
            a /= 2.0;
            for (int i = 0; i < lg; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    double xs = a * (is * xg[i] + 1.0);
                    xs *= xs;
                    const double rs = std::sqrt(1.0 - xs);
                    const double asr2 = -0.5 * (bs / xs + hk);
                    if (asr2 > -100.0) {
                        const double sp = 1.0 + cc * xs * (1.0 + dd * xs);
                        const double ep =
                            std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
                        bvn += a * w[i] * std::exp(asr2) * (ep - sp);
                    }
                }
            }
            bvn = -bvn / kTwoPi;
        }
        if (r > 0.0) {
            bvn += std_normal_cdf(-std::max(h, k));
        } else {
            bvn = -bvn;
            if (k > h) bvn += std_normal_cdf(k) - std_normal_cdf(h);
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

// Upper-tail probability with open (infinite) bounds and degenerate |r|
// handled exactly.
inline double bvn_upper(double h, double k, double r) {
    if (std::isinf(h) && h > 0.0) return 0.0;
    if (std::isinf(k) && k > 0.0) return 0.0;
    const bool h_open = std::isinf(h);  // h = -inf
    const bool k_open = std::isinf(k);
    if (h_open && k_open) return 1.0;
    if (h_open) return std_normal_cdf(-k);
    if (k_open) return std_normal_cdf(-h);

    if (r >= 1.0 - 1e-12) return std_normal_cdf(-std::max(h, k));
    if (r <= -1.0 + 1e-12)
        return std::max(0.0, std_normal_cdf(-k) - std_normal_cdf(h));
    return bvn_upper_tail(h, k, r);
}

}  // namespace detail

// P(lo1 < X < up1, lo2 < Y < up2) under a standard bivariate normal with
// correlation rho. Bounds may be +/-infinity for open intervals.
inline double bvn_rect_prob(double lo1, double up1, double lo2, double up2,
                            const Correlation& rho) {
    detail::require(!std::isnan(lo1) && !std::isnan(up1) && !std::isnan(lo2) &&
                        !std::isnan(up2),
                    "bounds must not be NaN");
    detail::require(lo1 <= up1 && lo2 <= up2, "inverted rectangle bounds");
    if (lo1 == up1 || lo2 == up2) return 0.0;

    const double r = rho.value();
    const double p = detail::bvn_upper(lo1, lo2, r) -
                     detail::bvn_upper(lo1, up2, r) -
                     detail::bvn_upper(up1, lo2, r) +
                     detail::bvn_upper(up1, up2, r);
    return std::clamp(p, 0.0, 1.0);
}

struct TailMoments {
    double mean;
    double variance;
};

// Mean and variance of a standard normal conditioned on exceeding its
// p_cut quantile.
inline TailMoments truncated_tail_moments(double p_cut) {
    detail::require_finite(p_cut, "p_cut");
    detail::require(p_cut > 0.0 && p_cut < 1.0, "p_cut must lie in (0, 1)");
    const double a = std_normal_quantile(p_cut);
    const double h = std_normal_pdf(a) / (1.0 - p_cut);
    return {h, 1.0 + a * h - h * h};
}

// Closed-form log-normal moments for a universe of n securities.
inline UniverseStats lognormal_universe_stats(const LogNormalVolModel& model,
                                              std::size_t n) {
    detail::require(n >= 2, "universe must contain at least 2 securities");
    const double m = model.log_mean;
    const double s2 = model.log_sd * model.log_sd;
    return UniverseStats(n,
                         std::exp(-m + 0.5 * s2),   // E(1/sigma)
                         std::exp(m + 0.5 * s2),    // E(sigma)
                         std::exp(2.0 * m + 2.0 * s2));
}

}  // namespace tair
