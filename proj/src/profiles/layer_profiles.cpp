#include "invlab/profiles/layer_profiles.hpp"

#include <cmath>
#include <stdexcept>

#include "invlab/core/quadrature.hpp"

namespace invlab {

double bump_rho(double z) {
    if (z >= 1.0 || z < 0.0) return z < 0.0 ? bump_rho(0.0) : 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

double bump_drho(double z) {
    if (z >= 1.0 || z <= 0.0) return 0.0;
    double d = 1.0 - z * z;
    return bump_rho(z) * (-2.0 * z / (d * d));
}

const ProfilePair& ProfilePair::instance() {
    static ProfilePair p;
    return p;
}

double ProfilePair::phi(double z) const {
    if (z >= 1.0) return 0.0;
    if (z < 0.0) z = 0.0;
    return bump_rho(z) * (1.0 - lambda_ * z);
}

double ProfilePair::dphi(double z) const {
    if (z >= 1.0 || z < 0.0) return 0.0;
    return bump_drho(z) * (1.0 - lambda_ * z) - lambda_ * bump_rho(z);
}

double ProfilePair::psi(double z) const {
    if (z >= 1.0) return 0.0;
    if (z <= 0.0) return 0.0;
    // cubic Hermite on the table; derivative values are phi (exact)
    double t = z / dz_;
    std::size_t i = std::min(std::size_t(t), psi_tab_.size() - 2);
    double u = t - double(i);
    double z0 = double(i) * dz_, z1 = z0 + dz_;
    double p0 = psi_tab_[i], p1 = psi_tab_[i + 1];
    double m0 = phi(z0) * dz_, m1 = phi(z1) * dz_;
    double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 +
           (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * m1;
}

ProfilePair::ProfilePair() {
    const double qtol = 1e-13;
    double I0 = adaptive_simpson([](double z) { return bump_rho(z); }, 0.0, 1.0, qtol);
    double I1 = adaptive_simpson([](double z) { return z * bump_rho(z); }, 0.0, 1.0, qtol);
    if (!(I1 > 0.0)) throw std::runtime_error("profile quadrature failed");
    lambda_ = I0 / I1;

    // cumulative integral table for psi on [0,1]
    const int n = 4096;
    dz_ = 1.0 / n;
    psi_tab_.assign(n + 1, 0.0);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double a = i * dz_, b = a + dz_;
        acc += adaptive_simpson([this](double z) { return phi(z); }, a, b, 1e-12, 16);
        psi_tab_[i + 1] = acc;
    }

    auto l2 = [&](auto f) {
        return std::sqrt(adaptive_simpson([&](double z) { double v = f(z); return v * v; },
                                          0.0, 1.0, qtol));
    };
    auto l2z2 = [&](auto f) {
        return std::sqrt(adaptive_simpson(
            [&](double z) { double v = z * f(z); return v * v; }, 0.0, 1.0, qtol));
    };
    norm_phi_l2_ = l2([this](double z) { return phi(z); });
    norm_psi_l2_ = l2([this](double z) { return psi(z); });
    norm_dphi_l2_ = l2([this](double z) { return dphi(z); });
    norm_dphi_l2_z2_ = l2z2([this](double z) { return dphi(z); });
    norm_phi_l2_z2_ = l2z2([this](double z) { return phi(z); });

    auto sup_scan = [&](auto f) {
        double best = 0.0, zb = 0.0;
        const int m = 20000;
        for (int i = 0; i <= m; ++i) {
            double z = double(i) / m;
            double v = std::fabs(f(z));
            if (v > best) { best = v; zb = z; }
        }
        double a = std::max(zb - 1.0 / m, 0.0), b = std::min(zb + 1.0 / m, 1.0);
        for (int it = 0; it < 200; ++it) {
            double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            if (std::fabs(f(m1)) < std::fabs(f(m2))) a = m1; else b = m2;
        }
        return std::fabs(f(0.5 * (a + b)));
    };
    norm_psi_linf_ = sup_scan([this](double z) { return psi(z); });
    norm_phi_linf_ = sup_scan([this](double z) { return phi(z); });
    sup_z2_dphi_ = sup_scan([this](double z) { return z * z * dphi(z); });
    sup_z2_phi_ = sup_scan([this](double z) { return z * z * phi(z); });
}

double ProfilePair::scaled_norm(double a, ScaledKind kind) const {
    if (!(a > 0.0 && a < 1.0)) throw std::domain_error("length scale a must be in (0,1)");
    switch (kind) {
        case ScaledKind::a: return std::sqrt(a) * norm_phi_l2_;
        case ScaledKind::b: return a * std::sqrt(a) * norm_psi_l2_;
        case ScaledKind::c: return std::sqrt(a) * norm_dphi_l2_z2_;
        case ScaledKind::d: return norm_dphi_l2_ / std::sqrt(a);
        case ScaledKind::e: return std::sqrt(a) * norm_phi_l2_z2_;
        case ScaledKind::f: return a * norm_psi_linf_;
        case ScaledKind::g: return a * sup_z2_dphi_;
        case ScaledKind::h: return a * sup_z2_phi_;
    }
    throw std::domain_error("unknown scaled-norm kind");
}

double ProfilePair::scaled_norm_quadrature(double a, ScaledKind kind) const {
    if (!(a > 0.0 && a < 1.0)) throw std::domain_error("length scale a must be in (0,1)");
    const double qtol = 1e-12;
    auto l2y = [&](auto f) {
        return std::sqrt(adaptive_simpson([&](double y) { double v = f(y); return v * v; },
                                          0.0, a, qtol));
    };
    auto supy = [&](auto f) {
        double best = 0.0;
        const int m = 200000;
        for (int i = 0; i <= m; ++i) {
            double y = a * double(i) / m;
            best = std::max(best, std::fabs(f(y)));
        }
        return best;
    };
    switch (kind) {
        case ScaledKind::a: return l2y([&](double y) { return phi(y / a); });
        case ScaledKind::b: return l2y([&](double y) { return a * psi(y / a); });
        case ScaledKind::c: return l2y([&](double y) { return y * dphi(y / a) / a; });
        case ScaledKind::d: return l2y([&](double y) { return dphi(y / a) / a; });
        case ScaledKind::e: return l2y([&](double y) { return y * phi(y / a) / a; });
        case ScaledKind::f: return supy([&](double y) { return a * psi(y / a); });
        case ScaledKind::g: return supy([&](double y) { return y * y * dphi(y / a) / a; });
        case ScaledKind::h: return supy([&](double y) { return y * y * phi(y / a) / a; });
    }
    throw std::domain_error("unknown scaled-norm kind");
}

double ProfilePair::scaled_exponent(ScaledKind kind) {
    switch (kind) {
        case ScaledKind::a: return 0.5;
        case ScaledKind::b: return 1.5;
        case ScaledKind::c: return 0.5;
        case ScaledKind::d: return -0.5;
        case ScaledKind::e: return 0.5;
        case ScaledKind::f: return 1.0;
        case ScaledKind::g: return 1.0;
        case ScaledKind::h: return 1.0;
    }
    return 0.0;
}

double ProfilePair::bound_exponent(ScaledKind kind) {
    // exponents of a = sqrt(theta nu) in the scaling lemma's right-hand sides
    switch (kind) {
        case ScaledKind::a: return 0.5;
        case ScaledKind::b: return 0.5;
        case ScaledKind::c: return 0.5;
        case ScaledKind::d: return -0.5;
        case ScaledKind::e: return 0.5;
        case ScaledKind::f: return 1.0;
        case ScaledKind::g: return 1.0;
        case ScaledKind::h: return 1.0;
    }
    return 0.0;
}

const char* ProfilePair::kind_name(ScaledKind kind) {
    switch (kind) {
        case ScaledKind::a: return "phi_L2";
        case ScaledKind::b: return "a_psi_L2";
        case ScaledKind::c: return "D3phi_L2_y2";
        case ScaledKind::d: return "D3phi_L2";
        case ScaledKind::e: return "D3psi_L2_y2";
        case ScaledKind::f: return "a_psi_Linf";
        case ScaledKind::g: return "D3phi_Linf_y2";
        case ScaledKind::h: return "D3psi_Linf_y2";
    }
    return "?";
}

} // namespace invlab
