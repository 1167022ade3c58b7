#pragma once
#include <vector>

namespace invlab {

/// Boundary-layer cutoff pair: phi(z) = rho(z)(1 - lambda z) with the bump
/// rho(z) = exp(1 - 1/(1-z^2)) on [0,1), zero beyond, and lambda chosen so
/// that the running integral psi(z) = int_0^z phi returns to zero at z = 1.
/// This gives psi' = phi, phi(0) = 1, psi(0) = 0, and phi = psi = 0 past 1.
class ProfilePair {
  public:
    static const ProfilePair& instance();  // built once, immutable afterwards

    double phi(double z) const;
    double dphi(double z) const;
    double psi(double z) const;  // cubic-Hermite evaluation of the tabulated integral
    double lambda() const { return lambda_; }

    // reference norms on [0, infinity) (support is [0,1])
    double norm_phi_l2() const { return norm_phi_l2_; }
    double norm_psi_l2() const { return norm_psi_l2_; }
    double norm_dphi_l2() const { return norm_dphi_l2_; }
    double norm_dphi_l2_z2() const { return norm_dphi_l2_z2_; }
    double norm_phi_l2_z2() const { return norm_phi_l2_z2_; }
    double norm_psi_linf() const { return norm_psi_linf_; }
    double norm_phi_linf() const { return norm_phi_linf_; }
    double sup_z2_dphi() const { return sup_z2_dphi_; }
    double sup_z2_phi() const { return sup_z2_phi_; }

    /// The eight scaled-profile quantities, with a = sqrt(theta nu):
    ///   a: ||phi(./a)||_L2            = a^{1/2}  ||phi||_L2
    ///   b: ||a psi(./a)||_L2          = a^{3/2}  ||psi||_L2
    ///   c: ||D3[phi(./a)]||_L2(z^2)   = a^{1/2}  ||phi'||_L2(z^2)
    ///   d: ||D3[phi(./a)]||_L2        = a^{-1/2} ||phi'||_L2
    ///   e: ||D3[psi(./a)]||_L2(z^2)   = a^{1/2}  ||phi||_L2(z^2)
    ///   f: ||a psi(./a)||_Linf        = a        ||psi||_Linf
    ///   g: ||D3[phi(./a)]||_Linf(z^2) = a        sup z^2|phi'|
    ///   h: ||D3[psi(./a)]||_Linf(z^2) = a        sup z^2|phi|
    enum class ScaledKind { a, b, c, d, e, f, g, h };
    static constexpr int n_kinds = 8;

    double scaled_norm(double a, ScaledKind kind) const;
    /// direct quadrature / scan of the scaled integrand (cross-check route)
    double scaled_norm_quadrature(double a, ScaledKind kind) const;
    /// exact exponent of a in scaled_norm
    static double scaled_exponent(ScaledKind kind);
    /// exponent of a in the corresponding upper bound of the scaling lemma
    static double bound_exponent(ScaledKind kind);
    static const char* kind_name(ScaledKind kind);

  private:
    ProfilePair();
    double lambda_ = 0.0;
    double norm_phi_l2_ = 0.0, norm_psi_l2_ = 0.0, norm_dphi_l2_ = 0.0;
    double norm_dphi_l2_z2_ = 0.0, norm_phi_l2_z2_ = 0.0, norm_psi_linf_ = 0.0;
    double norm_phi_linf_ = 0.0;
    double sup_z2_dphi_ = 0.0, sup_z2_phi_ = 0.0;
    std::vector<double> psi_tab_;  // uniform table on [0,1]
    double dz_ = 0.0;
};

double bump_rho(double z);
double bump_drho(double z);

} // namespace invlab
