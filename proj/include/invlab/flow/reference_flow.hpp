#pragma once
#include <array>
#include <stdexcept>
#include <string>

namespace invlab {

enum class FlowKind { Shear, Vortex };

FlowKind flow_kind_from_string(const std::string& s);

/// Manufactured Euler reference flow on the half space. Each velocity
/// component is a separable product T1(x1) T2(x2) M(y3) times a temporal
/// pulse P(t) = 1 + pulse_amp sin(pulse_omega t); the forcing F0 is
/// assembled so that  dt w0 + (w0.grad) w0 + grad q = F0  holds identically.
///
///   shear:  w0 = P(t) (m(y3) sin kx2, m(y3) sin kx1, 0),    m = A e^{-kappa y3}
///   vortex: w0 = P(t) (0, rho'(y3) sin kx2, -k rho(y3) cos kx2),
///           rho = A y3 e^{-kappa y3}   (so w0_3 vanishes on the wall)
///
/// The optional pressure mode turns on q = q_amp cos(kx1) e^{-y3}.
class ReferenceFlow {
  public:
    ReferenceFlow(FlowKind kind, double amplitude, double decay, double period,
                  double pulse_amp = 0.0, double pulse_omega = 0.0,
                  double q_amp = 0.0);

    FlowKind kind() const { return kind_; }
    double amplitude() const { return A_; }
    double decay() const { return kappa_; }
    double period() const { return P_; }
    double q_amplitude() const { return qamp_; }
    bool q_mode() const { return qamp_ != 0.0; }

    /// w0 component c, spatial derivative multi-index (d1, d2, d3)
    double w0_d(int c, int d1, int d2, int d3, double t, double x1, double x2,
                double y3) const;
    double w0(int c, double t, double x1, double x2, double y3) const {
        return w0_d(c, 0, 0, 0, t, x1, x2, y3);
    }
    /// time derivative of the same
    double dt_w0_d(int c, int d1, int d2, int d3, double t, double x1, double x2,
                   double y3) const;
    double dt_w0(int c, double t, double x1, double x2, double y3) const {
        return dt_w0_d(c, 0, 0, 0, t, x1, x2, y3);
    }

    double q(double t, double x1, double x2, double y3) const;
    double q_d(int dir, double t, double x1, double x2, double y3) const;

    /// F0 = dt w0 + (w0 . grad) w0 + grad q
    double f0(int c, double t, double x1, double x2, double y3) const;

    /// initial data W0 = w0(0, .)
    double W0(int c, double x1, double x2, double y3) const {
        return w0(c, 0.0, x1, x2, y3);
    }

    /// sup over t in [0, T] of the pulse factor (used for the H^s sup norm:
    /// ||w0(t)||_{H^s} = |P(t)| ||W||_{H^s})
    double pulse_sup() const { return 1.0 + std::abs(pulse_amp_); }
    double pulse(double t) const;
    double dpulse(double t) const;

  private:
    // separable factors: trig kind 0 -> 1, 1 -> sin(k x), 2 -> cos(k x),
    // with derivative cycling; vertical kinds handled in vert().
    double trig(int kind, double x, int deriv) const;
    double vert(int c, double y, int deriv) const;
    int trig1_kind(int c) const;
    int trig2_kind(int c) const;
    double comp_scale(int c) const;

    FlowKind kind_;
    double A_, kappa_, P_, k_;
    double pulse_amp_, pulse_omega_;
    double qamp_;
};

} // namespace invlab
