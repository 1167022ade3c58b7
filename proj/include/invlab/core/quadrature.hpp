#pragma once
#include <cmath>
#include <functional>

namespace invlab {

/// Adaptive Simpson quadrature with a relative tolerance (the absolute
/// tolerance is set from a coarse composite pass over the interval).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-12, int max_depth = 24);

namespace detail {
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth);
}

} // namespace invlab
