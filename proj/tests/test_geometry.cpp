#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "invlab/geom/profile.hpp"

using namespace invlab;

TEST_CASE("flat profile evaluates to zero everywhere") {
    auto p = BoundaryProfile::flat();
    CHECK(p.g(0.3, -12.0) == 0.0);
    CHECK(p.g(1e6, 2.0) == 0.0);
    CHECK(p.L() == 0.0);
}

TEST_CASE("cosine profile values and L") {
    // g = 1 + cos x1 cos x2 (A = 1, P = 2 pi)
    auto p = BoundaryProfile::cosine(1.0, 2.0 * M_PI);
    CHECK(p.g(0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p.g(M_PI, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    // five multi-indices |gamma| in {1,2}, each with sup-norm 1
    CHECK(p.L() == doctest::Approx(5.0).epsilon(1e-3));
}

TEST_CASE("cosine derivative evaluators agree with finite differences") {
    auto p = BoundaryProfile::cosine(0.7, 3.1);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    const double h = 1e-5;
    for (int k = 0; k < 50; ++k) {
        double x = dist(rng), y = dist(rng);
        double fd1 = (p.g(x + h, y) - p.g(x - h, y)) / (2 * h);
        double fd2 = (p.g(x, y + h) - p.g(x, y - h)) / (2 * h);
        double fd11 = (p.g(x + h, y) - 2 * p.g(x, y) + p.g(x - h, y)) / (h * h);
        double fd12 = (p.g(x + h, y + h) - p.g(x + h, y - h) - p.g(x - h, y + h) +
                       p.g(x - h, y - h)) / (4 * h * h);
        CHECK(p.d1(x, y) == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(p.d2(x, y) == doctest::Approx(fd2).epsilon(1e-6));
        CHECK(p.d11(x, y) == doctest::Approx(fd11).epsilon(1e-4));
        CHECK(p.d12(x, y) == doctest::Approx(fd12).epsilon(1e-4));
    }
}

TEST_CASE("tabulated profile: interpolation, derivatives, and range errors") {
    const int n = 64;
    const double extent = 4.0;
    std::vector<double> tab(n * n);
    auto fn = [&](double x, double y) {
        return 1.5 + std::sin(2 * M_PI * x / extent) * std::cos(2 * M_PI * y / extent);
    };
    for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < n; ++i1)
            tab[i2 * n + i1] = fn(extent * i1 / (n - 1), extent * i2 / (n - 1));
    auto p = BoundaryProfile::tabulated(tab, n, extent);

    // interpolation accuracy away from the boundary of the table
    for (double x : {0.9, 1.7, 2.3}) {
        for (double y : {1.1, 2.9}) {
            CHECK(p.g(x, y) == doctest::Approx(fn(x, y)).epsilon(1e-5));
        }
    }
    // derivative consistency under finite differencing at O(h^2)
    const double h = 1e-4;
    double x = 1.3, y = 2.1;
    double fd1 = (p.g(x + h, y) - p.g(x - h, y)) / (2 * h);
    CHECK(p.d1(x, y) == doctest::Approx(fd1).epsilon(1e-6));
    double fd11 = (p.g(x + h, y) - 2 * p.g(x, y) + p.g(x - h, y)) / (h * h);
    CHECK(p.d11(x, y) == doctest::Approx(fd11).epsilon(1e-4));

    CHECK_THROWS_AS(p.g(-0.5, 1.0), OutOfRangeError);
    CHECK_THROWS_AS(p.g(1.0, extent + 0.2), OutOfRangeError);
    CHECK(p.L() > 0.0);
}

TEST_CASE("tabulated profile rejects negative heights") {
    std::vector<double> tab(16 * 16, 1.0);
    tab[5] = -0.2;
    CHECK_THROWS_AS(BoundaryProfile::tabulated(tab, 16, 1.0), std::invalid_argument);
}

TEST_CASE("flattening map round trip and height example") {
    auto prof = BoundaryProfile::cosine(1.0, 2.0 * M_PI);
    FlatteningMap map(prof, 0.1, 3.0);
    // alpha=3, delta=0.1: delta^alpha g(0,0) = 1e-3 * 2
    double y[3] = {0.0, 0.0, 1.0}, x[3];
    map.psi0(y, x);
    CHECK(x[2] == doctest::Approx(1.002).epsilon(1e-14));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        double yy[3] = {d(rng), d(rng), std::fabs(d(rng))};
        double xx[3], back[3];
        map.psi0(yy, xx);
        map.phi0(xx, back);
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::fabs(back[i] - yy[i]));
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("flat profile gives the identity flattening") {
    FlatteningMap map(BoundaryProfile::flat(), 0.2, 3.0);
    double y[3] = {1.0, -2.0, 0.7}, x[3];
    map.psi0(y, x);
    CHECK(x[0] == y[0]);
    CHECK(x[1] == y[1]);
    CHECK(x[2] == y[2]);
    auto m = matrices_at(map, 0.3, 0.4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(m.B[i][j] == (i == j ? 1.0 : 0.0));
}

TEST_CASE("pullback composes with Psi0") {
    auto prof = BoundaryProfile::cosine(0.5, 2.0 * M_PI);
    FlatteningMap map(prof, 0.2, 3.0);
    auto f = [](double, double, double x3) { return x3; };
    auto fp = pullback(map, f);
    CHECK(fp(0.7, 0.9, 1.3) ==
          doctest::Approx(1.3 + map.height(0.7, 0.9)).epsilon(1e-15));
}

TEST_CASE("transform matrices: structure and identities at 1e5 random points") {
    auto prof = BoundaryProfile::cosine(1.0, 2.0 * M_PI);
    FlatteningMap map(prof, 0.3, 3.0);
    const double dd = std::pow(0.3, 2.0);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(-8.0, 8.0);
    double maxB = 0.0;
    int bad_shape = 0, bad_det = 0, bad_decomp = 0, bad_dg = 0;
    double worst_inv = 0.0;
    for (int k = 0; k < 100000; ++k) {
        double y1 = d(rng), y2 = d(rng);
        auto m = matrices_at(map, y1, y2);
        // lower triangular with unit diagonal
        if (m.B[0][0] != 1.0 || m.B[1][1] != 1.0 || m.B[2][2] != 1.0 ||
            m.B[0][1] != 0.0 || m.B[0][2] != 0.0 || m.B[1][2] != 0.0 ||
            m.B[1][0] != 0.0)
            ++bad_shape;
        double det = m.B[0][0] * (m.B[1][1] * m.B[2][2] - m.B[1][2] * m.B[2][1]) -
                     m.B[0][1] * (m.B[1][0] * m.B[2][2] - m.B[1][2] * m.B[2][0]) +
                     m.B[0][2] * (m.B[1][0] * m.B[2][1] - m.B[1][1] * m.B[2][0]);
        if (det != 1.0) ++bad_det;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (m.B[i][j] != (i == j ? 1.0 : 0.0) + dd * m.Bg[i][j]) ++bad_decomp;
        if (m.dg[2] != 0.0) ++bad_dg;
        // B (I - dd Bg) = I exactly (Bg nilpotent)
        double inv[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) inv[i][j] = (i == j ? 1.0 : 0.0) - dd * m.Bg[i][j];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int l = 0; l < 3; ++l) s += m.B[i][l] * inv[l][j];
                worst_inv = std::max(worst_inv, std::fabs(s - (i == j ? 1.0 : 0.0)));
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) maxB = std::max(maxB, std::fabs(m.B[i][j]));
    }
    CHECK(bad_shape == 0);
    CHECK(bad_det == 0);
    CHECK(bad_decomp == 0);
    CHECK(bad_dg == 0);
    CHECK(worst_inv <= 1e-14);
    // sup-norm bound ||B|| <= max{L, 1}
    CHECK(maxB <= std::max(prof.L(), 1.0) + 1e-12);
}

TEST_CASE("L dense-sampling matches closed form for scaled cosine") {
    // D-sups: A w, A w, A w^2, A w^2, A w^2 with w = 2 pi / P
    double A = 0.25, P = 3.0;
    auto p = BoundaryProfile::cosine(A, P);
    double w = 2.0 * M_PI / P;
    double expect = A * (2.0 * w + 3.0 * w * w);
    CHECK(p.L() == doctest::Approx(expect).epsilon(1e-3));
}
