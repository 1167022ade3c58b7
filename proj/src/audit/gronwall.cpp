#include "invlab/audit/gronwall.hpp"

#include <cmath>
#include <stdexcept>

namespace invlab {

namespace {

struct Interp {
    const std::vector<double>& t;
    const std::vector<double>& v;
    double operator()(double x) const {
        if (x <= t.front()) return v.front();
        if (x >= t.back()) return v.back();
        std::size_t lo = 0, hi = t.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (t[mid] <= x ? lo : hi) = mid;
        }
        double u = (x - t[lo]) / (t[hi] - t[lo]);
        return v[lo] + u * (v[hi] - v[lo]);
    }
};

std::vector<double> integrate(const Interp& f0, const Interp& f1, const Interp& f2,
                              double y0, double t0, double t1, int nsteps) {
    std::vector<double> out(nsteps + 1);
    out[0] = y0;
    const double h = (t1 - t0) / nsteps;
    double y = y0;
    auto rhs = [&](double t, double yy) {
        yy = std::max(yy, 0.0);
        return f0(t) * yy + f1(t) * std::sqrt(yy) + f2(t);
    };
    for (int i = 0; i < nsteps; ++i) {
        double t = t0 + i * h;
        double k1 = rhs(t, y);
        double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        double k4 = rhs(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        y = std::max(y, 0.0);
        out[i + 1] = y;
    }
    return out;
}

} // namespace

GronwallResult gronwall_envelope(const std::vector<double>& t,
                                 const std::vector<double>& f0,
                                 const std::vector<double>& f1,
                                 const std::vector<double>& f2, double f_init,
                                 double gamma, double rel_tol) {
    if (t.size() < 2 || f0.size() != t.size() || f1.size() != t.size() ||
        f2.size() != t.size())
        throw std::domain_error("gronwall_envelope: inconsistent series");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (f0[i] < 0.0 || f1[i] < 0.0 || f2[i] < 0.0 || !std::isfinite(f0[i]) ||
            !std::isfinite(f1[i]) || !std::isfinite(f2[i]))
            throw std::domain_error("gronwall_envelope: coefficients must be >= 0");
    if (f_init < 0.0) throw std::domain_error("gronwall_envelope: f_init must be >= 0");
    if (!(gamma > 0.0)) throw std::domain_error("gronwall_envelope: gamma must be > 0");

    Interp i0{t, f0}, i1{t, f1}, i2{t, f2};
    const double y0 = f_init * f_init;
    int n = 4 * int(t.size());
    std::vector<double> coarse = integrate(i0, i1, i2, y0, t.front(), t.back(), n);
    for (int it = 0; it < 16; ++it) {
        std::vector<double> fine = integrate(i0, i1, i2, y0, t.front(), t.back(), 2 * n);
        double diff = std::fabs(fine.back() - coarse.back());
        coarse = std::move(fine);
        n *= 2;
        if (diff <= rel_tol * std::max(1e-300, std::fabs(coarse.back()))) break;
    }

    GronwallResult res;
    res.t.resize(t.size());
    res.y.resize(t.size());
    const double h = (t.back() - t.front()) / n;
    for (std::size_t i = 0; i < t.size(); ++i) {
        res.t[i] = t[i];
        double pos = (t[i] - t.front()) / h;
        std::size_t k = std::min(std::size_t(pos), std::size_t(n) - 1);
        double u = pos - double(k);
        res.y[i] = coarse[k] + u * (coarse[k + 1] - coarse[k]);
    }
    double sup = 0.0;
    for (double y : coarse) sup = std::max(sup, std::sqrt(std::max(y, 0.0)));
    res.sup_sqrt_y = sup;
    res.M = sup / gamma;
    return res;
}

} // namespace invlab
