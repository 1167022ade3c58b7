#pragma once
#include <functional>
#include <string>

namespace invlab {

/// One (eta, nu, delta) point together with the constants it is judged
/// against and the derived quantities theta and beta.
struct ParamTriple {
    double eta = 0.05;
    double nu = 1.25e-4;
    double delta = 0.05;
    double alpha = 3.0;
    double Lambda = 0.7;
    double K0 = 1.0;
    double delta0 = 0.2;
    double epsilon = 0.1;
    // computed on demand
    double theta = 0.0;
    double beta_value = 0.0;

    double dpow(double e) const;            // delta^e
    double layer_width() const;             // sqrt(theta*nu)
    double budget() const;                  // beta + delta^{alpha-5/2}
};

struct Verdict {
    bool ok = false;
    std::string reason;  // names the violated clause when !ok
};

using BetaFn = std::function<double(double, double)>;

/// default beta(eta, nu) = (eta + sqrt(nu/eta))^{1/2}: meets the beta clause
/// with equality and vanishes along paths with nu/eta -> 0.
double beta_default(double eta, double nu);

/// theta = Lambda^2 eps^2 eta / (4 sup_t ||w0||_{H^s}^2 + 1)
double theta_of(double eps, double eta, double Lambda, double w0_sup_norm);

/// any eps <= eps_star keeps theta*nu < 1 for all eta, nu in (0,1)
double epsilon_star();

/// membership in E(K0, delta0, beta)
Verdict is_admissible(const ParamTriple& p, const BetaFn& beta);
Verdict is_admissible(const ParamTriple& p);  // with beta_default

/// the explicit smallness condition used in the ellipticity proof:
/// delta^{alpha-1} [Lambda^{-2} + K0 Lambda^{-5} L^2] <= 1/4
bool smallness_condition(double delta, double alpha, double Lambda, double K0, double L);

} // namespace invlab
