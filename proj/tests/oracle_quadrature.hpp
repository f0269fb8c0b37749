// oracle_quadrature.hpp
//
// Independent numerical oracles used only by the test suite: adaptive
// Simpson quadrature in one and two dimensions, and a bisection inverse for
// the normal CDF. These deliberately share no code with the library's
// closed-form or series implementations.

#pragma once

#include <cmath>
#include <functional>

#include "tair/stat_kernels.hpp"

namespace oracle {

inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Clamp an infinite rectangle bound; the standard normal carries ~1e-17
// mass beyond +/-8.5, far below the oracle tolerances in use.
inline double clamp_bound(double x) {
    if (std::isinf(x)) return x > 0.0 ? 8.5 : -8.5;
    return x;
}

// Adaptive Simpson over panels of width <= 1 so narrow ridges cannot slip
// between the initial probe points.
inline double integrate_panels(const std::function<double(double)>& f,
                               double a, double b, double tol) {
    if (a >= b) return 0.0;
    const int n = std::max(1, static_cast<int>(std::ceil(b - a)));
    const double step = (b - a) / n;
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        total += integrate(f, a + i * step, a + (i + 1) * step, tol / n);
    return total;
}

// 2-D tensor quadrature of the bivariate normal density over a rectangle.
// The inner range is clamped to +/-9 conditional standard deviations around
// the conditional mean; the omitted mass is below 1e-17.
inline double bvn_rect(double lo1, double up1, double lo2, double up2,
                       double rho, double tol = 1e-9) {
    const double a1 = clamp_bound(lo1), b1 = clamp_bound(up1);
    const double a2 = clamp_bound(lo2), b2 = clamp_bound(up2);
    if (a1 >= b1 || a2 >= b2) return 0.0;
    const double det = 1.0 - rho * rho;
    const double norm = 1.0 / (tair::kTwoPi * std::sqrt(det));
    const double cond_sd = std::sqrt(det);
    auto inner = [&](double x) {
        auto density = [&](double y) {
            const double q = x * x - 2.0 * rho * x * y + y * y;
            return norm * std::exp(-0.5 * q / det);
        };
        const double mu = rho * x;
        const double lo = std::max(a2, mu - 9.0 * cond_sd);
        const double hi = std::min(b2, mu + 9.0 * cond_sd);
        return integrate_panels(density, lo, hi, tol * 0.02);
    };
    return integrate_panels(inner, a1, b1, tol);
}

// Inverse normal CDF by bisection; independent of the library's rational
// approximation.
inline double normal_quantile(double p, double tol = 1e-14) {
    double lo = -40.0, hi = 40.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (0.5 * std::erfc(-mid * M_SQRT1_2) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Tail conditional moments of the standard normal above its p-quantile,
// by direct quadrature.
inline void tail_moments(double p_cut, double& mean, double& variance) {
    const double a = normal_quantile(p_cut);
    const double hi = std::max(a, 0.0) + 12.0;
    auto phi = [](double x) {
        return tair::kInvSqrtTwoPi * std::exp(-0.5 * x * x);
    };
    const double mass = integrate([&](double x) { return phi(x); }, a, hi);
    const double m1 = integrate([&](double x) { return x * phi(x); }, a, hi) / mass;
    const double m2 =
        integrate([&](double x) { return x * x * phi(x); }, a, hi) / mass;
    mean = m1;
    variance = m2 - m1 * m1;
}

}  // namespace oracle
