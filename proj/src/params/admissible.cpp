#include "invlab/params/admissible.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace invlab {

double ParamTriple::dpow(double e) const { return std::pow(delta, e); }

double ParamTriple::layer_width() const { return std::sqrt(theta * nu); }

double ParamTriple::budget() const { return beta_value + dpow(alpha - 2.5); }

double beta_default(double eta, double nu) {
    if (!(nu > 0.0 && eta > nu && eta < 1.0))
        throw std::domain_error("beta_default requires 0 < nu < eta < 1");
    return std::sqrt(eta + std::sqrt(nu / eta));
}

double theta_of(double eps, double eta, double Lambda, double w0_sup_norm) {
    if (!(eps > 0.0 && eta > 0.0 && Lambda > 0.0 && w0_sup_norm > 0.0))
        throw std::invalid_argument("theta_of requires positive inputs");
    return Lambda * Lambda * eps * eps * eta / (4.0 * w0_sup_norm * w0_sup_norm + 1.0);
}

double epsilon_star() {
    // theta*nu = L^2 e^2 eta nu/(4W^2+1) < e^2 for Lambda, eta, nu in (0,1),
    // so eps <= 1 suffices
    return 1.0;
}

Verdict is_admissible(const ParamTriple& p, const BetaFn& beta) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p.eta) || !finite(p.nu) || !finite(p.delta) || !finite(p.alpha) ||
        !finite(p.K0) || !finite(p.delta0))
        throw std::invalid_argument("non-finite parameter");

    if (!(p.nu > 0.0)) return {false, "nu must be positive"};
    if (!(p.nu < p.eta)) return {false, "strict nu < eta violated"};
    if (!(p.eta < 1.0)) return {false, "eta must be below 1"};
    if (!(p.delta > 0.0)) return {false, "delta must be positive"};
    if (!(p.delta < p.delta0)) return {false, "delta must be below delta0"};
    if (!(p.delta < 1.0)) return {false, "delta must be below 1"};

    const double lhs = std::pow(p.delta, p.alpha - 1.0) * p.eta;
    if (lhs > p.K0 * p.nu) return {false, "delta^{alpha-1} eta <= K0 nu violated"};

    const double b = beta(p.eta, p.nu);
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("beta must be positive");
    const double clause = p.eta + std::sqrt(p.nu / p.eta);
    // tolerate rounding when beta is built to meet the clause with equality
    if (clause > b * b * (1.0 + 4.0 * DBL_EPSILON))
        return {false, "eta + sqrt(nu/eta) <= beta^2 violated"};

    return {true, ""};
}

Verdict is_admissible(const ParamTriple& p) {
    return is_admissible(p, [](double e, double n) { return beta_default(e, n); });
}

bool smallness_condition(double delta, double alpha, double Lambda, double K0, double L) {
    const double v = std::pow(delta, alpha - 1.0) *
                     (1.0 / (Lambda * Lambda) + K0 * L * L / std::pow(Lambda, 5));
    return v <= 0.25;
}

} // namespace invlab
