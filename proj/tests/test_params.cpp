#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "invlab/params/admissible.hpp"

using namespace invlab;

TEST_CASE("eta = nu fails the strict anisotropy clause") {
    ParamTriple p;
    p.eta = 1e-2;
    p.nu = 1e-2;
    p.delta = 0.05;
    auto v = is_admissible(p);
    CHECK_FALSE(v.ok);
    CHECK(v.reason == "strict nu < eta violated");
}

TEST_CASE("admissibility threshold in delta (alpha=3, K0=1)") {
    ParamTriple p;
    p.eta = 1e-2;
    p.nu = 1e-3;
    p.alpha = 3.0;
    p.K0 = 1.0;
    p.delta0 = 0.5;
    // delta^2 * 1e-2 <= 1e-3  <=>  delta <= sqrt(0.1) = 0.31623
    p.delta = 0.3162;
    CHECK(is_admissible(p).ok);
    p.delta = 0.3163;
    auto v = is_admissible(p);
    CHECK_FALSE(v.ok);
    CHECK(v.reason == "delta^{alpha-1} eta <= K0 nu violated");
    // the beta clause holds with equality for the default beta
    p.delta = 0.1;
    CHECK(is_admissible(p).ok);
}

TEST_CASE("boundary case: delta^{alpha-1} eta = K0 nu exactly is admissible") {
    ParamTriple p;
    p.eta = 0.25;
    p.nu = 0.25 * 0.25 * 0.25;  // with delta = 0.25, alpha = 3: delta^2 eta = nu
    p.delta = 0.25;
    p.alpha = 3.0;
    p.K0 = 1.0;
    p.delta0 = 0.5;
    CHECK(std::pow(p.delta, p.alpha - 1.0) * p.eta == p.K0 * p.nu);
    CHECK(is_admissible(p).ok);
}

TEST_CASE("delta0 gate and positivity clauses") {
    ParamTriple p;
    p.eta = 1e-2;
    p.nu = 1e-4;
    p.delta = 0.3;
    p.delta0 = 0.2;
    auto v = is_admissible(p);
    CHECK_FALSE(v.ok);
    CHECK(v.reason == "delta must be below delta0");
    p.delta = -0.1;
    CHECK_FALSE(is_admissible(p).ok);
}

TEST_CASE("non-finite inputs raise a validation error") {
    ParamTriple p;
    p.eta = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(is_admissible(p), std::invalid_argument);
}

TEST_CASE("beta_default values") {
    CHECK(beta_default(1e-2, 1e-3) == doctest::Approx(0.5712).epsilon(1e-4));
    CHECK(beta_default(1e-4, 1e-8) == doctest::Approx(0.1005).epsilon(1e-4));
    CHECK_THROWS_AS(beta_default(1e-3, 1e-2), std::domain_error);
    CHECK_THROWS_AS(beta_default(1e-3, 1e-3), std::domain_error);
}

TEST_CASE("beta_default decreases when eta and nu/eta decrease") {
    double prev = beta_default(0.5, 0.25 * 0.5);
    for (double s : {0.5, 0.25, 0.1, 0.02}) {
        double eta = 0.5 * s;
        double ratio = 0.25 * s;
        double b = beta_default(eta, ratio * ratio * eta);
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("theta formula") {
    // Lambda=0.5, eps=0.1, eta=0.01, ||w0||=1 -> 2.5e-5/5 = 5e-6
    CHECK(theta_of(0.1, 0.01, 0.5, 1.0) == doctest::Approx(5e-6).epsilon(1e-12));
    // linear in eta
    double t1 = theta_of(0.1, 0.01, 0.5, 2.0);
    double t2 = theta_of(0.1, 0.02, 0.5, 2.0);
    CHECK(t2 == doctest::Approx(2.0 * t1).epsilon(1e-12));
    CHECK_THROWS_AS(theta_of(-1.0, 0.1, 0.5, 1.0), std::invalid_argument);
    // theta <= Lambda^2 eps^2 eta / (4 ||w0||^2), the layer-lemma condition
    double th = theta_of(0.1, 0.01, 0.5, 1.3);
    CHECK(th <= 0.5 * 0.5 * 0.1 * 0.1 * 0.01 / (4.0 * 1.3 * 1.3));
}

TEST_CASE("theta*nu < 1 for eps below epsilon_star, across (0,1)^2") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> d(1e-8, 1.0 - 1e-8);
    for (int k = 0; k < 10000; ++k) {
        double eta = d(rng), nu = d(rng) * eta, L = d(rng);
        double w = 10.0 * d(rng) + 1e-3;
        double th = theta_of(epsilon_star(), eta, L, w);
        CHECK(th * nu < 1.0);
    }
}

TEST_CASE("admissibility is monotone in delta") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    int checked = 0;
    while (checked < 500) {
        ParamTriple p;
        p.eta = 1e-3 + 0.5 * d(rng);
        p.nu = p.eta * (1e-4 + 0.9 * d(rng));
        p.delta = 0.19 * d(rng) + 1e-4;
        p.alpha = 2.6 + 2.0 * d(rng);
        if (!is_admissible(p).ok) continue;
        ++checked;
        ParamTriple q = p;
        q.delta = p.delta * d(rng);
        if (q.delta <= 0) continue;
        CHECK(is_admissible(q).ok);
    }
}

TEST_CASE("derived invariants hold on admissible points") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    int checked = 0;
    while (checked < 500) {
        ParamTriple p;
        p.eta = 1e-3 + 0.5 * d(rng);
        p.nu = p.eta * (1e-4 + 0.9 * d(rng));
        p.delta = 0.19 * d(rng) + 1e-4;
        if (!is_admissible(p).ok) continue;
        ++checked;
        p.theta = theta_of(p.epsilon, p.eta, p.Lambda, 2.0);
        CHECK(p.theta * p.nu < 1.0);
        CHECK(std::pow(p.delta, p.alpha - 1.0) * p.eta / p.nu <= p.K0 * (1 + 1e-12));
    }
}

TEST_CASE("smallness condition for the ellipticity proof") {
    CHECK(smallness_condition(0.05, 3.0, 0.7, 1.0, 0.5));
    CHECK_FALSE(smallness_condition(0.9, 3.0, 0.2, 1.0, 5.0));
}
