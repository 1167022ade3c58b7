#pragma once
#include <vector>

namespace invlab {

struct GronwallResult {
    std::vector<double> t;
    std::vector<double> y;   // comparison solution of y' = f0 y + f1 sqrt(y) + f2
    double sup_sqrt_y = 0.0;
    double M = 0.0;          // smallest M with sup sqrt(y) <= M * gamma
};

/// Integrates y' = f0(t) y + f1(t) sqrt(y) + f2(t), y(0) = f_init^2, with a
/// classical RK4 sweep plus step halving until two refinements agree. The
/// sampled coefficient series are interpolated linearly.
GronwallResult gronwall_envelope(const std::vector<double>& t,
                                 const std::vector<double>& f0,
                                 const std::vector<double>& f1,
                                 const std::vector<double>& f2, double f_init,
                                 double gamma, double rel_tol = 1e-10);

} // namespace invlab
