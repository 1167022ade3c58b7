#pragma once
#include <cstddef>

// Flat-array arithmetic kernels used by the field, norm, and Krylov code.
// Scalar reference implementations always exist; on x86-64 with AVX2+FMA the
// dispatcher swaps in vectorized variants at startup. The two paths are
// equivalence-tested against each other (tests/test_kernels.cpp).

namespace invlab::simd {

// Name of the instruction set the dispatcher selected ("avx2" or "scalar").
const char* active_isa();

// Force the scalar reference path (used by the equivalence tests).
void force_scalar(bool on);

double dot(const double* a, const double* b, std::size_t n);
// sum_i w[i]*a[i]*b[i]
double wdot(const double* w, const double* a, const double* b, std::size_t n);
double sumsq(const double* a, std::size_t n);
// sum_i w[i]*a[i]*a[i]
double wsumsq(const double* w, const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);

// y += alpha*x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// y = x + beta*y
void xpby(const double* x, double beta, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
// z = x + alpha*y
void triad(double* z, const double* x, double alpha, const double* y, std::size_t n);
// z = x*y
void mul(double* z, const double* x, const double* y, std::size_t n);
// z += x*y
void fmadd(double* z, const double* x, const double* y, std::size_t n);

namespace detail {
struct Table {
    double (*dot)(const double*, const double*, std::size_t);
    double (*wdot)(const double*, const double*, const double*, std::size_t);
    double (*sumsq)(const double*, std::size_t);
    double (*wsumsq)(const double*, const double*, std::size_t);
    double (*max_abs)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*xpby)(const double*, double, double*, std::size_t);
    void (*scale)(double, double*, std::size_t);
    void (*triad)(double*, const double*, double, const double*, std::size_t);
    void (*mul)(double*, const double*, const double*, std::size_t);
    void (*fmadd)(double*, const double*, const double*, std::size_t);
};
const Table& scalar_table();
bool fill_avx2_table(Table& t);  // returns false if not compiled in / unsupported
} // namespace detail

} // namespace invlab::simd
