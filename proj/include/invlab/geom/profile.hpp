#pragma once
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace invlab {

struct OutOfRangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ProfileKind { Flat, Cosine, Tabulated };

/// Boundary height profile g: R^2 -> [0, inf), twice continuously
/// differentiable. Built-ins: flat (g = 0) and cosine
/// g(x') = A (1 + cos(2 pi x1/P) cos(2 pi x2/P)). Tabulated profiles use
/// periodic bicubic B-spline interpolation so second derivatives exist;
/// queries outside the tabulated box raise OutOfRangeError.
class BoundaryProfile {
  public:
    BoundaryProfile() = default;  // flat
    static BoundaryProfile flat();
    static BoundaryProfile cosine(double amplitude, double period);
    /// table[i2*n + i1] = g(x0 + i1*extent/n, y0 + i2*extent/n), periodic
    static BoundaryProfile tabulated(std::vector<double> table, int n, double extent);

    ProfileKind kind() const { return kind_; }
    double amplitude() const { return amplitude_; }
    double period() const { return period_; }

    double g(double x1, double x2) const;
    double d1(double x1, double x2) const;
    double d2(double x1, double x2) const;
    double d11(double x1, double x2) const;
    double d12(double x1, double x2) const;
    double d22(double x1, double x2) const;

    /// sum over multi-indices |gamma| in {1,2} of sup |D^gamma g|,
    /// computed by dense sampling (1024^2 per period); tolerance ~1e-3 rel.
    double L() const { return L_; }

  private:
    void compute_L();
    void spline_setup();
    double spline_eval(double x1, double x2, int dx1, int dx2) const;

    ProfileKind kind_ = ProfileKind::Flat;
    double amplitude_ = 0.0;
    double period_ = 1.0;
    double L_ = 0.0;

    // tabulated state
    int n_ = 0;
    double extent_ = 0.0;
    std::vector<double> coef_;  // periodic B-spline coefficients, n_*n_
};

/// Flattening pair Phi0 / Psi0 between the oscillatory domain and the
/// half-space: Psi0(y) = (y', y3 + delta^alpha g(y'/delta)).
struct FlatteningMap {
    BoundaryProfile profile;
    double delta;
    double alpha;

    FlatteningMap(BoundaryProfile p, double delta_, double alpha_)
        : profile(std::move(p)), delta(delta_), alpha(alpha_) {
        if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
        if (!(alpha > 2.5)) throw std::invalid_argument("alpha must exceed 5/2");
    }

    double height(double x1, double x2) const {
        return std::pow(delta, alpha) * profile.g(x1 / delta, x2 / delta);
    }
    void psi0(const double y[3], double x[3]) const {
        x[0] = y[0];
        x[1] = y[1];
        x[2] = y[2] + height(y[0], y[1]);
    }
    void phi0(const double x[3], double y[3]) const {
        y[0] = x[0];
        y[1] = x[1];
        y[2] = x[2] - height(x[0], x[1]);
    }
};

/// The matrices of the change of variables at a horizontal location y'.
struct TransformMatrices {
    double B[3][3];
    double Bg[3][3];
    double dg[3];
};

TransformMatrices matrices_at(const FlatteningMap& map, double y1, double y2);

/// Compose a function on the oscillatory domain with Psi0 to get a function
/// on the half-space (the field pullback of the change of variables).
template <class F>
auto pullback(const FlatteningMap& m, F f) {
    return [m, f](double y1, double y2, double y3) {
        double y[3] = {y1, y2, y3}, x[3];
        m.psi0(y, x);
        return f(x[0], x[1], x[2]);
    };
}

} // namespace invlab
