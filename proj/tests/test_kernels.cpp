#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "invlab/simd/kernels.hpp"

using namespace invlab;

namespace {

std::vector<double> randvec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

// sizes that hit the vector body, the remainder loop, and tiny inputs
const std::size_t sizes[] = {1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 63, 64, 65, 1023, 65539};

} // namespace

TEST_CASE("dispatch reports an isa") {
    simd::force_scalar(false);
    std::string isa = simd::active_isa();
    CHECK((isa == "avx2" || isa == "scalar"));
}

TEST_CASE("reduction kernels match scalar reference") {
    std::mt19937_64 rng(20240811);
    for (std::size_t n : sizes) {
        auto a = randvec(rng, n), b = randvec(rng, n), w = randvec(rng, n);
        for (auto& x : w) x = std::fabs(x) + 0.1;

        simd::force_scalar(true);
        double dot_s = simd::dot(a.data(), b.data(), n);
        double wdot_s = simd::wdot(w.data(), a.data(), b.data(), n);
        double ss_s = simd::sumsq(a.data(), n);
        double wss_s = simd::wsumsq(w.data(), a.data(), n);
        double ma_s = simd::max_abs(a.data(), n);
        simd::force_scalar(false);
        double dot_v = simd::dot(a.data(), b.data(), n);
        double wdot_v = simd::wdot(w.data(), a.data(), b.data(), n);
        double ss_v = simd::sumsq(a.data(), n);
        double wss_v = simd::wsumsq(w.data(), a.data(), n);
        double ma_v = simd::max_abs(a.data(), n);

        double tol = 1e-13 * (double(n) + 1.0);
        CHECK(std::fabs(dot_s - dot_v) <= tol);
        CHECK(std::fabs(wdot_s - wdot_v) <= tol);
        CHECK(std::fabs(ss_s - ss_v) <= tol);
        CHECK(std::fabs(wss_s - wss_v) <= tol);
        CHECK(ma_s == ma_v);  // max of |.| has no reassociation
    }
}

TEST_CASE("update kernels match scalar reference") {
    std::mt19937_64 rng(7);
    for (std::size_t n : sizes) {
        auto x = randvec(rng, n), y0 = randvec(rng, n), z0 = randvec(rng, n);

        auto y1 = y0, y2 = y0;
        simd::force_scalar(true);
        simd::axpy(0.37, x.data(), y1.data(), n);
        simd::force_scalar(false);
        simd::axpy(0.37, x.data(), y2.data(), n);
        CHECK(max_diff(y1, y2) <= 1e-15);

        y1 = y0; y2 = y0;
        simd::force_scalar(true);
        simd::xpby(x.data(), -1.25, y1.data(), n);
        simd::force_scalar(false);
        simd::xpby(x.data(), -1.25, y2.data(), n);
        CHECK(max_diff(y1, y2) <= 1e-15);

        auto z1 = z0, z2 = z0;
        simd::force_scalar(true);
        simd::triad(z1.data(), x.data(), 2.5, y0.data(), n);
        simd::fmadd(z1.data(), x.data(), y0.data(), n);
        simd::force_scalar(false);
        simd::triad(z2.data(), x.data(), 2.5, y0.data(), n);
        simd::fmadd(z2.data(), x.data(), y0.data(), n);
        CHECK(max_diff(z1, z2) <= 1e-15);

        z1 = z0; z2 = z0;
        simd::force_scalar(true);
        simd::mul(z1.data(), x.data(), y0.data(), n);
        simd::scale(0.5, z1.data(), n);
        simd::force_scalar(false);
        simd::mul(z2.data(), x.data(), y0.data(), n);
        simd::scale(0.5, z2.data(), n);
        CHECK(max_diff(z1, z2) == 0.0);
    }
    simd::force_scalar(false);
}
