#include "invlab/geom/profile.hpp"

#include <cmath>

namespace invlab {

namespace {

// natural cubic B-spline interpolation along one axis (uniform nodes)
void spline_solve_rows(std::vector<double>& a, int n, int nrows, int stride, int row_stride) {
    std::vector<double> c(n), d(n), x(n);
    for (int r = 0; r < nrows; ++r) {
        double* f = a.data() + std::size_t(r) * row_stride;
        // c0 = f0, c_{n-1} = f_{n-1}; inner tridiagonal (1,4,1)/6
        x[0] = f[0];
        x[n - 1] = f[(n - 1) * stride];
        if (n > 2) {
            // Thomas on i=1..n-2
            c[1] = 1.0 / 4.0;
            d[1] = (6.0 * f[1 * stride] - x[0]) / 4.0;
            for (int i = 2; i <= n - 2; ++i) {
                double m = 4.0 - c[i - 1];
                c[i] = 1.0 / m;
                double rhs = 6.0 * f[i * stride] - (i == n - 2 ? x[n - 1] : 0.0);
                d[i] = (rhs - d[i - 1]) / m;
            }
            x[n - 2] = d[n - 2];
            for (int i = n - 3; i >= 1; --i) x[i] = d[i] - c[i] * x[i + 1];
        }
        for (int i = 0; i < n; ++i) f[i * stride] = x[i];
    }
}

inline void bspline_weights(double u, int deriv, double w[4]) {
    switch (deriv) {
        case 0:
            w[0] = (1 - u) * (1 - u) * (1 - u) / 6.0;
            w[1] = (3 * u * u * u - 6 * u * u + 4) / 6.0;
            w[2] = (-3 * u * u * u + 3 * u * u + 3 * u + 1) / 6.0;
            w[3] = u * u * u / 6.0;
            break;
        case 1:
            w[0] = -(1 - u) * (1 - u) / 2.0;
            w[1] = (3 * u * u - 4 * u) / 2.0;
            w[2] = (-3 * u * u + 2 * u + 1) / 2.0;
            w[3] = u * u / 2.0;
            break;
        default:
            w[0] = 1 - u;
            w[1] = 3 * u - 2;
            w[2] = -3 * u + 1;
            w[3] = u;
            break;
    }
}

} // namespace

BoundaryProfile BoundaryProfile::flat() {
    BoundaryProfile p;
    p.kind_ = ProfileKind::Flat;
    p.L_ = 0.0;
    return p;
}

BoundaryProfile BoundaryProfile::cosine(double amplitude, double period) {
    if (amplitude < 0.0) throw std::invalid_argument("cosine amplitude must be >= 0 (g >= 0)");
    if (period <= 0.0) throw std::invalid_argument("period must be positive");
    BoundaryProfile p;
    p.kind_ = ProfileKind::Cosine;
    p.amplitude_ = amplitude;
    p.period_ = period;
    p.compute_L();
    return p;
}

BoundaryProfile BoundaryProfile::tabulated(std::vector<double> table, int n, double extent) {
    if (n < 4) throw std::invalid_argument("tabulated profile needs at least 4 points per axis");
    if (int(table.size()) != n * n) throw std::invalid_argument("table size mismatch");
    if (extent <= 0.0) throw std::invalid_argument("extent must be positive");
    for (double v : table)
        if (v < 0.0) throw std::invalid_argument("tabulated g must be nonnegative");
    BoundaryProfile p;
    p.kind_ = ProfileKind::Tabulated;
    p.n_ = n;
    p.extent_ = extent;
    p.period_ = extent;
    p.coef_ = std::move(table);
    p.spline_setup();
    p.compute_L();
    return p;
}

void BoundaryProfile::spline_setup() {
    // interpolating B-spline coefficients: rows (x1), then columns (x2)
    spline_solve_rows(coef_, n_, n_, 1, n_);
    spline_solve_rows(coef_, n_, n_, n_, 1);
}

double BoundaryProfile::spline_eval(double x1, double x2, int dx1, int dx2) const {
    const double tol = 1e-12 * extent_;
    if (x1 < -tol || x1 > extent_ + tol || x2 < -tol || x2 > extent_ + tol)
        throw OutOfRangeError("tabulated profile queried outside tabulated range");
    const double h = extent_ / (n_ - 1);
    auto locate = [&](double x, int& i, double& u) {
        double t = std::min(std::max(x / h, 0.0), double(n_ - 1));
        i = std::min(int(t), n_ - 2);
        u = t - i;
    };
    int i1, i2;
    double u1, u2;
    locate(x1, i1, u1);
    locate(x2, i2, u2);
    double w1[4], w2[4];
    bspline_weights(u1, dx1, w1);
    bspline_weights(u2, dx2, w2);
    // natural-end ghost coefficients: c_{-1} = 2c_0 - c_1, c_n = 2c_{n-1} - c_{n-2}
    auto fetch = [&](int a2, int a1) -> double {
        return coef_[std::size_t(a2) * n_ + a1];
    };
    auto c1d = [&](int a2, int a1) -> double {
        if (a1 < 0) return 2.0 * fetch(a2, 0) - fetch(a2, 1);
        if (a1 >= n_) return 2.0 * fetch(a2, n_ - 1) - fetch(a2, n_ - 2);
        return fetch(a2, a1);
    };
    auto cof = [&](int a2, int a1) -> double {
        if (a2 < 0) return 2.0 * c1d(0, a1) - c1d(1, a1);
        if (a2 >= n_) return 2.0 * c1d(n_ - 1, a1) - c1d(n_ - 2, a1);
        return c1d(a2, a1);
    };
    double s = 0.0;
    for (int j2 = 0; j2 < 4; ++j2)
        for (int j1 = 0; j1 < 4; ++j1)
            s += w2[j2] * w1[j1] * cof(i2 - 1 + j2, i1 - 1 + j1);
    return s * std::pow(1.0 / h, dx1 + dx2);
}

double BoundaryProfile::g(double x1, double x2) const {
    switch (kind_) {
        case ProfileKind::Flat: return 0.0;
        case ProfileKind::Cosine: {
            double w = 2.0 * M_PI / period_;
            return amplitude_ * (1.0 + std::cos(w * x1) * std::cos(w * x2));
        }
        case ProfileKind::Tabulated: return spline_eval(x1, x2, 0, 0);
    }
    return 0.0;
}

double BoundaryProfile::d1(double x1, double x2) const {
    switch (kind_) {
        case ProfileKind::Flat: return 0.0;
        case ProfileKind::Cosine: {
            double w = 2.0 * M_PI / period_;
            return -amplitude_ * w * std::sin(w * x1) * std::cos(w * x2);
        }
        case ProfileKind::Tabulated: return spline_eval(x1, x2, 1, 0);
    }
    return 0.0;
}

double BoundaryProfile::d2(double x1, double x2) const {
    switch (kind_) {
        case ProfileKind::Flat: return 0.0;
        case ProfileKind::Cosine: {
            double w = 2.0 * M_PI / period_;
            return -amplitude_ * w * std::cos(w * x1) * std::sin(w * x2);
        }
        case ProfileKind::Tabulated: return spline_eval(x1, x2, 0, 1);
    }
    return 0.0;
}

double BoundaryProfile::d11(double x1, double x2) const {
    switch (kind_) {
        case ProfileKind::Flat: return 0.0;
        case ProfileKind::Cosine: {
            double w = 2.0 * M_PI / period_;
            return -amplitude_ * w * w * std::cos(w * x1) * std::cos(w * x2);
        }
        case ProfileKind::Tabulated: return spline_eval(x1, x2, 2, 0);
    }
    return 0.0;
}

double BoundaryProfile::d12(double x1, double x2) const {
    switch (kind_) {
        case ProfileKind::Flat: return 0.0;
        case ProfileKind::Cosine: {
            double w = 2.0 * M_PI / period_;
            return amplitude_ * w * w * std::sin(w * x1) * std::sin(w * x2);
        }
        case ProfileKind::Tabulated: return spline_eval(x1, x2, 1, 1);
    }
    return 0.0;
}

double BoundaryProfile::d22(double x1, double x2) const {
    switch (kind_) {
        case ProfileKind::Flat: return 0.0;
        case ProfileKind::Cosine: {
            double w = 2.0 * M_PI / period_;
            return -amplitude_ * w * w * std::cos(w * x1) * std::cos(w * x2);
        }
        case ProfileKind::Tabulated: return spline_eval(x1, x2, 0, 2);
    }
    return 0.0;
}

void BoundaryProfile::compute_L() {
    if (kind_ == ProfileKind::Flat) {
        L_ = 0.0;
        return;
    }
    const int N = 1024;
    const double span = (kind_ == ProfileKind::Cosine) ? period_ : extent_;
    double s1 = 0, s2 = 0, s11 = 0, s12 = 0, s22 = 0;
    for (int i2 = 0; i2 < N; ++i2) {
        double x2 = span * (i2 + 0.5) / N;
        for (int i1 = 0; i1 < N; ++i1) {
            double x1 = span * (i1 + 0.5) / N;
            s1 = std::max(s1, std::fabs(d1(x1, x2)));
            s2 = std::max(s2, std::fabs(d2(x1, x2)));
            s11 = std::max(s11, std::fabs(d11(x1, x2)));
            s12 = std::max(s12, std::fabs(d12(x1, x2)));
            s22 = std::max(s22, std::fabs(d22(x1, x2)));
        }
    }
    L_ = s1 + s2 + s11 + s12 + s22;
}

TransformMatrices matrices_at(const FlatteningMap& map, double y1, double y2) {
    TransformMatrices m{};
    const double dd = std::pow(map.delta, map.alpha - 1.0);
    const double g1 = map.profile.d1(y1 / map.delta, y2 / map.delta);
    const double g2 = map.profile.d2(y1 / map.delta, y2 / map.delta);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            m.B[i][j] = (i == j) ? 1.0 : 0.0;
            m.Bg[i][j] = 0.0;
        }
    m.Bg[2][0] = -g1;
    m.Bg[2][1] = -g2;
    m.B[2][0] = dd * m.Bg[2][0];
    m.B[2][1] = dd * m.Bg[2][1];
    m.dg[0] = -g1;
    m.dg[1] = -g2;
    m.dg[2] = 0.0;
    return m;
}

} // namespace invlab
