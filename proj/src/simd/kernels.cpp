#include "invlab/simd/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace invlab::simd {

namespace {

double s_dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double s_wdot(const double* w, const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * b[i];
    return s;
}

double s_sumsq(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
    return s;
}

double s_wsumsq(const double* w, const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * a[i];
    return s;
}

double s_max_abs(const double* a, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
    return m;
}

void s_axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void s_xpby(const double* x, double beta, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void s_scale(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void s_triad(double* z, const double* x, double alpha, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] + alpha * y[i];
}

void s_mul(double* z, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void s_fmadd(double* z, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] += x[i] * y[i];
}

detail::Table make_scalar() {
    return detail::Table{s_dot, s_wdot, s_sumsq, s_wsumsq, s_max_abs,
                         s_axpy, s_xpby, s_scale, s_triad, s_mul, s_fmadd};
}

struct Dispatch {
    detail::Table table;
    const char* isa = "scalar";
    Dispatch() {
        table = make_scalar();
        detail::Table v;
        if (detail::fill_avx2_table(v)) {
            table = v;
            isa = "avx2";
        }
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

bool g_force_scalar = false;

const detail::Table& active() {
    if (g_force_scalar) return detail::scalar_table();
    return dispatch().table;
}

} // namespace

const detail::Table& detail::scalar_table() {
    static detail::Table t = make_scalar();
    return t;
}

const char* active_isa() { return g_force_scalar ? "scalar" : dispatch().isa; }
void force_scalar(bool on) { g_force_scalar = on; }

double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
double wdot(const double* w, const double* a, const double* b, std::size_t n) { return active().wdot(w, a, b, n); }
double sumsq(const double* a, std::size_t n) { return active().sumsq(a, n); }
double wsumsq(const double* w, const double* a, std::size_t n) { return active().wsumsq(w, a, n); }
double max_abs(const double* a, std::size_t n) { return active().max_abs(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { active().axpy(alpha, x, y, n); }
void xpby(const double* x, double beta, double* y, std::size_t n) { active().xpby(x, beta, y, n); }
void scale(double alpha, double* x, std::size_t n) { active().scale(alpha, x, n); }
void triad(double* z, const double* x, double alpha, const double* y, std::size_t n) { active().triad(z, x, alpha, y, n); }
void mul(double* z, const double* x, const double* y, std::size_t n) { active().mul(z, x, y, n); }
void fmadd(double* z, const double* x, const double* y, std::size_t n) { active().fmadd(z, x, y, n); }

} // namespace invlab::simd
