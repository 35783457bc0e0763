#pragma once

#include <cmath>
#include <functional>

namespace quadrature {

namespace detail {

inline double simpson_step(std::function<double(double)> const& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
    double const m = 0.5 * (a + b);
    double const lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double const flm = f(lm), frm = f(rm);
    double const left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double const right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double const delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive composite Simpson rule with absolute tolerance `tol`. The range
/// is pre-split into `pieces` panels so narrow peaks are not skipped.
inline double simpson(std::function<double(double)> const& f, double a, double b, double tol,
                      int pieces = 64) {
    double total = 0.0;
    double const h = (b - a) / pieces;
    for (int k = 0; k < pieces; ++k) {
        double const lo = a + k * h, hi = k + 1 == pieces ? b : a + (k + 1) * h;
        double const fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
        double const whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / pieces, 50);
    }
    return total;
}

}  // namespace quadrature
