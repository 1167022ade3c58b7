#pragma once
#include "invlab/flow/reference_flow.hpp"
#include "invlab/geom/profile.hpp"
#include "invlab/params/admissible.hpp"

namespace invlab {

/// The domain-discrepancy corrector pair: wt ("w tilde") seals the gap
/// between the oscillatory and flat domains,
///   wt_1 = -w0_1,  wt_2 = -w0_2,
///   wt_3 = -w0_3 + (d^{3/2} + d^{a-1}) (-D1g(y'/d) w0_1 - D2g(y'/d) w0_2),
/// and w = w0 - d^{a-5/2} wt is the perturbed reference flow. Everything is
/// closed form; evaluators cover values, space and time derivatives, and the
/// boundary divergence A(t,y') = D1 w1 + D2 w2 at y3 = 0.
class CorrectorPair {
  public:
    CorrectorPair(const ReferenceFlow& flow, const FlatteningMap& geom);

    const ReferenceFlow& flow() const { return *flow_; }
    const FlatteningMap& geom() const { return *geom_; }
    double delta_pow() const { return dp_; }  // delta^{alpha - 5/2}

    double wt(int c, double t, double x1, double x2, double y3) const;
    double dt_wt(int c, double t, double x1, double x2, double y3) const;
    /// spatial derivative of wt in direction dir (1..3)
    double wt_d(int c, int dir, double t, double x1, double x2, double y3) const;

    double w(int c, double t, double x1, double x2, double y3) const;
    double dt_w(int c, double t, double x1, double x2, double y3) const;
    double w_d(int c, int dir, double t, double x1, double x2, double y3) const;
    /// tangential second derivatives of the tangential components at the
    /// wall (these never involve g): D_{d1} D_{d2} w_c(t, y', 0)
    double w_dd_tan(int c, int d1, int d2, double t, double x1, double x2) const;
    double dt_w_d_tan(int c, int dir, double t, double x1, double x2) const;

    /// A(t,y') = D1 w1 + D2 w2 at y3 = 0 and friends
    double bdiv(double t, double x1, double x2) const;
    double dt_bdiv(double t, double x1, double x2) const;
    double bdiv_d(int dir, double t, double x1, double x2) const;  // dir 1|2

    /// div(B w) evaluated in closed form (identically zero analytically)
    double divBw(double t, double x1, double x2, double y3) const;
    /// the wall identity residual w3 - d^{a-1}(D1g w1 + D2g w2) at y3 = 0
    double wall_identity_residual(double t, double x1, double x2) const;

  private:
    double G(int i, double x1, double x2) const;       // D_i g (y'/delta)
    double dG(int i, int k, double x1, double x2) const;  // D_k [D_i g(y'/delta)]

    const ReferenceFlow* flow_;
    const FlatteningMap* geom_;
    double dp_;    // delta^{alpha-5/2}
    double cdel_;  // delta^{3/2} + delta^{alpha-1}
    double da1_;   // delta^{alpha-1}
};

} // namespace invlab
