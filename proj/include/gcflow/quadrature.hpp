#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gcflow {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // roundoff floor: delta carries ~dozens of ulps of the partial sums, so
    // below that there is nothing left to refine
    const double floor_tol =
        1.5e-14 * (std::abs(left) + std::abs(right) + std::abs(whole));
    if (std::abs(delta) <= std::max(15.0 * tol, floor_tol) ||
        (b - a) < 1e-14 * (1.0 + std::abs(a)))
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw QuadratureError("adaptive_simpson: tolerance not reached");
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

//! Adaptive Simpson quadrature of f over [a, b] (limits may be reversed).
//! Throws QuadratureError when the requested tolerance is unreachable.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol,
                        int max_depth = 48) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return sign * detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace gcflow
