#include "invlab/core/quadrature.hpp"

#include <algorithm>

namespace invlab {

namespace detail {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    // coarse composite pass to set the absolute tolerance scale
    const int n = 64;
    double h = (b - a) / n;
    double scale = 0.0, total = 0.0;
    double fa_prev = f(a);
    for (int i = 0; i < n; ++i) {
        double x0 = a + i * h, x1 = x0 + h;
        double fm = f(0.5 * (x0 + x1));
        double fb = f(x1);
        total += h / 6.0 * (fa_prev + 4.0 * fm + fb);
        scale += h * (std::fabs(fa_prev) + 4.0 * std::fabs(fm) + std::fabs(fb)) / 6.0;
        fa_prev = fb;
    }
    double atol = std::max(rel_tol * std::max(scale, std::fabs(total)), 1e-300);

    double acc = 0.0;
    fa_prev = f(a);
    for (int i = 0; i < n; ++i) {
        double x0 = a + i * h, x1 = x0 + h;
        double fm = f(0.5 * (x0 + x1));
        double fb = f(x1);
        double whole = h / 6.0 * (fa_prev + 4.0 * fm + fb);
        acc += detail::simpson_rec(f, x0, x1, fa_prev, fm, fb, whole, atol / n,
                                   std::max(max_depth - 6, 4));
        fa_prev = fb;
    }
    return acc;
}

} // namespace invlab
