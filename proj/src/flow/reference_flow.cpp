#include "invlab/flow/reference_flow.hpp"

#include <cmath>

namespace invlab {

FlowKind flow_kind_from_string(const std::string& s) {
    if (s == "shear") return FlowKind::Shear;
    if (s == "vortex") return FlowKind::Vortex;
    throw std::invalid_argument("unknown flow kind: " + s);
}

ReferenceFlow::ReferenceFlow(FlowKind kind, double amplitude, double decay, double period,
                             double pulse_amp, double pulse_omega, double q_amp)
    : kind_(kind),
      A_(amplitude),
      kappa_(decay),
      P_(period),
      k_(2.0 * M_PI / period),
      pulse_amp_(pulse_amp),
      pulse_omega_(pulse_omega),
      qamp_(q_amp) {
    if (!(amplitude > 0.0) || !(decay > 0.0) || !(period > 0.0))
        throw std::invalid_argument("flow amplitude, decay, and period must be positive");
}

double ReferenceFlow::pulse(double t) const {
    return 1.0 + pulse_amp_ * std::sin(pulse_omega_ * t);
}

double ReferenceFlow::dpulse(double t) const {
    return pulse_amp_ * pulse_omega_ * std::cos(pulse_omega_ * t);
}

double ReferenceFlow::trig(int kind, double x, int deriv) const {
    if (kind == 0) return deriv == 0 ? 1.0 : 0.0;
    const double kp = std::pow(k_, deriv);
    const double phase = k_ * x + deriv * M_PI_2;
    return kind == 1 ? kp * std::sin(phase) : kp * std::cos(phase);
}

int ReferenceFlow::trig1_kind(int c) const {
    if (kind_ == FlowKind::Shear) return c == 1 ? 1 : 0;  // sin kx1 on comp 2
    return 0;
}

int ReferenceFlow::trig2_kind(int c) const {
    if (kind_ == FlowKind::Shear) return c == 0 ? 1 : 0;  // sin kx2 on comp 1
    // vortex: comp 2 has sin kx2, comp 3 has cos kx2
    return c == 1 ? 1 : (c == 2 ? 2 : 0);
}

double ReferenceFlow::comp_scale(int c) const {
    if (kind_ == FlowKind::Shear) return c == 2 ? 0.0 : 1.0;
    if (c == 0) return 0.0;
    return c == 1 ? 1.0 : -k_;
}

double ReferenceFlow::vert(int c, double y, int deriv) const {
    const double E = std::exp(-kappa_ * y);
    if (kind_ == FlowKind::Shear) {
        return A_ * std::pow(-kappa_, deriv) * E;
    }
    // vortex: comp 2 carries rho', comp 3 carries rho,  rho = A y e^{-kappa y}
    int d = deriv + (c == 1 ? 1 : 0);
    if (d == 0) return A_ * y * E;
    return A_ * E * std::pow(-kappa_, d - 1) * (double(d) - kappa_ * y);
}

double ReferenceFlow::w0_d(int c, int d1, int d2, int d3, double t, double x1, double x2,
                           double y3) const {
    const double s = comp_scale(c);
    if (s == 0.0) return 0.0;
    return pulse(t) * s * trig(trig1_kind(c), x1, d1) * trig(trig2_kind(c), x2, d2) *
           vert(c, y3, d3);
}

double ReferenceFlow::dt_w0_d(int c, int d1, int d2, int d3, double t, double x1,
                              double x2, double y3) const {
    const double s = comp_scale(c);
    if (s == 0.0) return 0.0;
    return dpulse(t) * s * trig(trig1_kind(c), x1, d1) * trig(trig2_kind(c), x2, d2) *
           vert(c, y3, d3);
}

double ReferenceFlow::q(double t, double x1, double x2, double y3) const {
    (void)t;
    (void)x2;
    if (qamp_ == 0.0) return 0.0;
    return qamp_ * std::cos(k_ * x1) * std::exp(-y3);
}

double ReferenceFlow::q_d(int dir, double t, double x1, double x2, double y3) const {
    (void)t;
    (void)x2;
    if (qamp_ == 0.0) return 0.0;
    switch (dir) {
        case 1: return -qamp_ * k_ * std::sin(k_ * x1) * std::exp(-y3);
        case 2: return 0.0;
        case 3: return -qamp_ * std::cos(k_ * x1) * std::exp(-y3);
    }
    return 0.0;
}

double ReferenceFlow::f0(int c, double t, double x1, double x2, double y3) const {
    double adv = 0.0;
    for (int k = 0; k < 3; ++k) {
        double wk = w0(k, t, x1, x2, y3);
        if (wk == 0.0) continue;
        int d1 = k == 0, d2 = k == 1, d3 = k == 2;
        adv += wk * w0_d(c, d1, d2, d3, t, x1, x2, y3);
    }
    return dt_w0(c, t, x1, x2, y3) + adv + q_d(c + 1, t, x1, x2, y3);
}

} // namespace invlab
