#include "invlab/solver/viscosity.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace invlab {

ViscKind visc_kind_from_string(const std::string& s) {
    if (s == "diagonal") return ViscKind::Diagonal;
    if (s == "checkerboard") return ViscKind::Checkerboard;
    throw std::invalid_argument("unknown viscosity kind: " + s);
}

ViscositySpec::ViscositySpec(ViscKind kind, double eta, double nu, double Lambda,
                             double perturbation, double cell1, double cell2,
                             double cell3, double flip_period)
    : kind_(kind),
      eta_(eta),
      nu_(nu),
      Lambda_(Lambda),
      pert_(kind == ViscKind::Diagonal ? 0.0 : perturbation),
      c1_(cell1),
      c2_(cell2),
      c3_(cell3),
      flip_(flip_period) {
    if (!(nu > 0.0 && nu < eta && eta < 1.0))
        throw std::invalid_argument("viscosity requires 0 < nu < eta < 1");
    if (!(Lambda > 0.0 && Lambda < 1.0))
        throw std::invalid_argument("Lambda must lie in (0,1)");
    // the Gershgorin shift of H is 3 pert nu; keep the declared Lambda valid
    if (3.0 * pert_ > 1.0 - Lambda_ + 1e-12)
        throw std::invalid_argument(
            "checkerboard perturbation too large for the declared Lambda");
}

int ViscositySpec::cell_sign(int e, double t, double x1, double x2, double x3) const {
    auto cell = [](double x, double c) {
        return (long long)std::floor(x / c);
    };
    long long c1 = cell(x1, c1_), c2 = cell(x2, c2_), c3 = cell(x3, c3_);
    long long tflip = (long long)std::floor(t / flip_);
    long long h = c1 * 73856093LL + c2 * 19349663LL + c3 * 83492791LL + e * 2654435761LL;
    int s = ((h >> 1) ^ tflip) & 1 ? -1 : 1;
    return s;
}

void ViscositySpec::a0(double t, double x1, double x2, double x3, double out[3][3]) const {
    out[0][0] = eta_;
    out[1][1] = eta_;
    out[2][2] = nu_;
    out[0][1] = out[1][0] = 0.0;
    out[0][2] = out[2][0] = 0.0;
    out[1][2] = out[2][1] = 0.0;
    if (kind_ == ViscKind::Diagonal || pert_ == 0.0) return;
    const double m = pert_ * nu_;
    double h11 = m * cell_sign(0, t, x1, x2, x3);
    double h22 = m * cell_sign(1, t, x1, x2, x3);
    double h33 = m * cell_sign(2, t, x1, x2, x3);
    double h12 = m * cell_sign(3, t, x1, x2, x3);
    double h13 = m * cell_sign(4, t, x1, x2, x3);
    double h23 = m * cell_sign(5, t, x1, x2, x3);
    out[0][0] += h11;
    out[1][1] += h22;
    out[2][2] += h33;
    out[0][1] = out[1][0] = h12;
    out[0][2] = out[2][0] = h13;
    out[1][2] = out[2][1] = h23;
}

double ViscositySpec::check_ellipticity(int samples, unsigned seed,
                                        std::string* witness) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(-3.0, 3.0), ut(0.0, 1.0);
    std::normal_distribution<double> nd(0.0, 1.0);
    double worst = 1e300;
    for (int k = 0; k < samples; ++k) {
        double t = ut(rng), x1 = ud(rng), x2 = ud(rng), x3 = std::fabs(ud(rng));
        double xi[3] = {nd(rng), nd(rng), nd(rng)};
        // weight toward the anisotropic sphere
        xi[0] /= std::sqrt(eta_);
        xi[1] /= std::sqrt(eta_);
        xi[2] /= std::sqrt(nu_);
        double A[3][3];
        a0(t, x1, x2, x3, A);
        double num = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) num += A[i][j] * xi[i] * xi[j];
        double den = eta_ * (xi[0] * xi[0] + xi[1] * xi[1]) + nu_ * xi[2] * xi[2];
        double ratio = num / den;
        if (ratio < worst) {
            worst = ratio;
            if (witness && ratio < Lambda_) {
                std::ostringstream os;
                os << "ellipticity ratio " << ratio << " < Lambda at t=" << t
                   << " x=(" << x1 << "," << x2 << "," << x3 << ")";
                *witness = os.str();
            }
        }
    }
    return worst;
}

SandwichReport sandwich_check(const ViscositySpec& spec, const FlatteningMap& geom,
                              long samples, double t_max, unsigned seed) {
    SandwichReport rep;
    rep.min_lower = 1e300;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, 8.0), uy(0.0, 2.0), ut(0.0, t_max);
    std::normal_distribution<double> nd(0.0, 1.0);
    const double eta = spec.eta(), nu = spec.nu();
    const double da1 = std::pow(geom.delta, geom.alpha - 1.0);
    const double half = 0.5 * spec.Lambda();

    for (long k = 0; k < samples; ++k) {
        double t = ut(rng);
        double y1 = ux(rng), y2 = ux(rng), y3 = uy(rng);
        double y[3] = {y1, y2, y3}, x[3];
        geom.psi0(y, x);
        double A[3][3];
        spec.a0(t, x[0], x[1], x[2], A);
        auto m = matrices_at(geom, y1, y2);

        // xi from the anisotropy-weighted sphere, zeta isotropic
        double xi[3] = {nd(rng) / std::sqrt(eta), nd(rng) / std::sqrt(eta),
                        nd(rng) / std::sqrt(nu)};
        double ze[3] = {nd(rng), nd(rng), nd(rng)};

        // B* v = (v1 + B[2][0] v3, v2 + B[2][1] v3, v3)
        auto bstar = [&](const double v[3], double out[3]) {
            out[0] = v[0] + m.B[2][0] * v[2];
            out[1] = v[1] + m.B[2][1] * v[2];
            out[2] = v[2];
        };
        double bxi[3], bze[3];
        bstar(xi, bxi);
        bstar(ze, bze);

        auto quad = [&](const double a[3], const double b[3]) {
            double s = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) s += A[i][j] * a[i] * b[j];
            return s;
        };

        double num = quad(bxi, bxi);
        double den = eta * (xi[0] * xi[0] + xi[1] * xi[1]) + nu * xi[2] * xi[2];
        double lower = num / den;
        rep.min_lower = std::min(rep.min_lower, lower);
        rep.max_upper = std::max(rep.max_upper, lower);
        if (lower < half) {
            ++rep.violations;
            if (rep.witness.empty()) {
                std::ostringstream os;
                os << "lower ratio " << lower << " < Lambda/2 at t=" << t << " y=("
                   << y1 << "," << y2 << "," << y3 << ") xi=(" << xi[0] << "," << xi[1]
                   << "," << xi[2] << ")";
                rep.witness = os.str();
            }
        }

        double cross = std::fabs(quad(bxi, bze));
        double xp = std::hypot(xi[0], xi[1]), zp = std::hypot(ze[0], ze[1]);
        double shape = eta * xp * zp + nu * std::fabs(xi[2] * ze[2]) +
                       (da1 * eta + nu) * (std::fabs(xi[2]) * zp + std::fabs(ze[2]) * xp);
        if (shape > 0.0) rep.max_cross = std::max(rep.max_cross, cross / shape);
    }
    return rep;
}

} // namespace invlab
