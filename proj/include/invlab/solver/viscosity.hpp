#pragma once
#include <string>

#include "invlab/geom/profile.hpp"
#include "invlab/params/admissible.hpp"

namespace invlab {

enum class ViscKind { Diagonal, Checkerboard };

ViscKind visc_kind_from_string(const std::string& s);

/// The measurable viscosity matrix A0(t,x) = diag(eta, eta, nu) + H, where H
/// is a symmetric piecewise-constant perturbation on checkerboard cells with
/// entries of magnitude `perturbation * nu`, flipping sign every
/// `flip_period` in time. Only measurability is assumed downstream; the
/// pattern is deliberately discontinuous.
class ViscositySpec {
  public:
    ViscositySpec(ViscKind kind, double eta, double nu, double Lambda,
                  double perturbation = 0.1, double cell1 = 0.1, double cell2 = 0.1,
                  double cell3 = 0.05, double flip_period = 0.1);

    ViscKind kind() const { return kind_; }
    double eta() const { return eta_; }
    double nu() const { return nu_; }
    double Lambda() const { return Lambda_; }
    double perturbation() const { return pert_; }

    void a0(double t, double x1, double x2, double x3, double out[3][3]) const;

    /// verify the raw ellipticity/boundedness pair on random samples;
    /// returns the worst lower ratio (should stay >= Lambda)
    double check_ellipticity(int samples, unsigned seed, std::string* witness) const;

  private:
    int cell_sign(int e, double t, double x1, double x2, double x3) const;

    ViscKind kind_;
    double eta_, nu_, Lambda_, pert_;
    double c1_, c2_, c3_, flip_;
};

struct SandwichReport {
    double min_lower = 0.0;   // min of <A0 B* xi, B* xi> / (eta|xi'|^2 + nu|xi3|^2)
    double max_upper = 0.0;   // max of the same ratio
    double max_cross = 0.0;   // max of |<A0 B* xi, B* zeta>| / bound shape
    long violations = 0;      // samples with lower ratio < Lambda/2
    std::string witness;      // first violating sample, if any
};

/// Monte-Carlo verification of the transformed-ellipticity sandwich over
/// random (t, y, xi, zeta); xi is drawn on the anisotropy-weighted sphere so
/// the minimum is probed tightly.
SandwichReport sandwich_check(const ViscositySpec& spec, const FlatteningMap& geom,
                              long samples, double t_max, unsigned seed);

} // namespace invlab
