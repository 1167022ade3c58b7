#include "invlab/flow/correctors.hpp"

#include <cmath>

namespace invlab {

CorrectorPair::CorrectorPair(const ReferenceFlow& flow, const FlatteningMap& geom)
    : flow_(&flow), geom_(&geom) {
    dp_ = std::pow(geom.delta, geom.alpha - 2.5);
    cdel_ = std::pow(geom.delta, 1.5) + std::pow(geom.delta, geom.alpha - 1.0);
    da1_ = std::pow(geom.delta, geom.alpha - 1.0);
    // the flow and the boundary profile must tile the same periodic box
    if (geom.profile.kind() == ProfileKind::Cosine) {
        double cell = geom.profile.period() * geom.delta;
        double ratio = flow.period() / cell;
        if (std::fabs(ratio - std::round(ratio)) > 1e-9 * std::fabs(ratio))
            throw std::invalid_argument(
                "profile oscillation does not tile the flow period");
    }
}

double CorrectorPair::G(int i, double x1, double x2) const {
    const auto& p = geom_->profile;
    const double d = geom_->delta;
    return i == 1 ? p.d1(x1 / d, x2 / d) : p.d2(x1 / d, x2 / d);
}

double CorrectorPair::dG(int i, int k, double x1, double x2) const {
    const auto& p = geom_->profile;
    const double d = geom_->delta;
    double v;
    if (i == 1 && k == 1) v = p.d11(x1 / d, x2 / d);
    else if (i == 2 && k == 2) v = p.d22(x1 / d, x2 / d);
    else v = p.d12(x1 / d, x2 / d);
    return v / d;
}

double CorrectorPair::wt(int c, double t, double x1, double x2, double y3) const {
    const auto& f = *flow_;
    if (c < 2) return -f.w0(c, t, x1, x2, y3);
    return -f.w0(2, t, x1, x2, y3) +
           cdel_ * (-G(1, x1, x2) * f.w0(0, t, x1, x2, y3) -
                    G(2, x1, x2) * f.w0(1, t, x1, x2, y3));
}

double CorrectorPair::dt_wt(int c, double t, double x1, double x2, double y3) const {
    const auto& f = *flow_;
    if (c < 2) return -f.dt_w0(c, t, x1, x2, y3);
    return -f.dt_w0(2, t, x1, x2, y3) +
           cdel_ * (-G(1, x1, x2) * f.dt_w0(0, t, x1, x2, y3) -
                    G(2, x1, x2) * f.dt_w0(1, t, x1, x2, y3));
}

double CorrectorPair::wt_d(int c, int dir, double t, double x1, double x2,
                           double y3) const {
    const auto& f = *flow_;
    const int d1 = dir == 1, d2 = dir == 2, d3 = dir == 3;
    if (c < 2) return -f.w0_d(c, d1, d2, d3, t, x1, x2, y3);
    double v = -f.w0_d(2, d1, d2, d3, t, x1, x2, y3);
    v += cdel_ * (-G(1, x1, x2) * f.w0_d(0, d1, d2, d3, t, x1, x2, y3) -
                  G(2, x1, x2) * f.w0_d(1, d1, d2, d3, t, x1, x2, y3));
    if (dir != 3)
        v += cdel_ * (-dG(1, dir, x1, x2) * f.w0(0, t, x1, x2, y3) -
                      dG(2, dir, x1, x2) * f.w0(1, t, x1, x2, y3));
    return v;
}

double CorrectorPair::w(int c, double t, double x1, double x2, double y3) const {
    return flow_->w0(c, t, x1, x2, y3) - dp_ * wt(c, t, x1, x2, y3);
}

double CorrectorPair::dt_w(int c, double t, double x1, double x2, double y3) const {
    return flow_->dt_w0(c, t, x1, x2, y3) - dp_ * dt_wt(c, t, x1, x2, y3);
}

double CorrectorPair::w_d(int c, int dir, double t, double x1, double x2,
                          double y3) const {
    const int d1 = dir == 1, d2 = dir == 2, d3 = dir == 3;
    return flow_->w0_d(c, d1, d2, d3, t, x1, x2, y3) -
           dp_ * wt_d(c, dir, t, x1, x2, y3);
}

double CorrectorPair::w_dd_tan(int c, int d1, int d2, double t, double x1,
                               double x2) const {
    // tangential components only: w_c = (1 + dp) w0_c for c in {0, 1}
    int m1 = (d1 == 1) + (d2 == 1);
    int m2 = (d1 == 2) + (d2 == 2);
    return (1.0 + dp_) * flow_->w0_d(c, m1, m2, 0, t, x1, x2, 0.0);
}

double CorrectorPair::dt_w_d_tan(int c, int dir, double t, double x1, double x2) const {
    return (1.0 + dp_) * flow_->dt_w0_d(c, dir == 1, dir == 2, 0, t, x1, x2, 0.0);
}

double CorrectorPair::bdiv(double t, double x1, double x2) const {
    return (1.0 + dp_) * (flow_->w0_d(0, 1, 0, 0, t, x1, x2, 0.0) +
                          flow_->w0_d(1, 0, 1, 0, t, x1, x2, 0.0));
}

double CorrectorPair::dt_bdiv(double t, double x1, double x2) const {
    return (1.0 + dp_) * (flow_->dt_w0_d(0, 1, 0, 0, t, x1, x2, 0.0) +
                          flow_->dt_w0_d(1, 0, 1, 0, t, x1, x2, 0.0));
}

double CorrectorPair::bdiv_d(int dir, double t, double x1, double x2) const {
    int m1 = dir == 1, m2 = dir == 2;
    return (1.0 + dp_) * (flow_->w0_d(0, 1 + m1, m2, 0, t, x1, x2, 0.0) +
                          flow_->w0_d(1, m1, 1 + m2, 0, t, x1, x2, 0.0));
}

double CorrectorPair::divBw(double t, double x1, double x2, double y3) const {
    // div(Bw) = D1 w1 + D2 w2 + D3[(Bw)_3],
    // (Bw)_3 = -d^{a-1}(G1 w1 + G2 w2) + w3 and G is y3-independent
    double d3 = -da1_ * (G(1, x1, x2) * w_d(0, 3, t, x1, x2, y3) +
                         G(2, x1, x2) * w_d(1, 3, t, x1, x2, y3)) +
                w_d(2, 3, t, x1, x2, y3);
    return w_d(0, 1, t, x1, x2, y3) + w_d(1, 2, t, x1, x2, y3) + d3;
}

double CorrectorPair::wall_identity_residual(double t, double x1, double x2) const {
    double w1 = w(0, t, x1, x2, 0.0);
    double w2 = w(1, t, x1, x2, 0.0);
    double w3 = w(2, t, x1, x2, 0.0);
    return w3 - da1_ * (G(1, x1, x2) * w1 + G(2, x1, x2) * w2);
}

} // namespace invlab
