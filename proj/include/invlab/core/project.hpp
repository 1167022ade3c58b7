#pragma once
#include <vector>

#include "invlab/core/ops.hpp"

namespace invlab {

struct SolveStats {
    int iters = 0;
    double residual = 0.0;
    bool converged = false;
};

/// x'-plane samples of the flattening matrix row 3: B = I + d^{a-1} B_g.
/// Empty arrays mean B = I (flat boundary).
struct PlaneB {
    std::vector<double> b31, b32;  // size n1*n2 each when present
    bool flat() const { return b31.empty(); }
};

/// Which velocity degrees of freedom the projection may correct.
///   Trace: output space {div(Bu)=0, u3 = 0 at the walls}; the wall-normal
///          samples are zeroed and corrections keep them zero (the
///          Helmholtz--Leray flavor: output has exactly zero normal trace,
///          tangential wall values free).
///   NoSlip: corrections vanish on all wall components; wall values of the
///           input pass through untouched (the solver flavor, which holds
///           u = 0 at the walls exactly).
enum class ProjectorBc { Trace, NoSlip };

/// Projection onto {div(B u) = 0} with the natural no-flux condition:
/// out = f - B* grad(p), grad the adjoint-consistent cell->node gradient,
/// p solved from div(B B* grad p) = div(B f) by CG with a per-Fourier-mode
/// tridiagonal factorization of the flat (B = I) operator as preconditioner.
class Projector {
  public:
    Projector(Ops& ops, PlaneB B, ProjectorBc bc,
              double rtol = 1e-10, double atol = 1e-12, int maxiter = 10000);

    void divB(const Field& u, CellField& out);
    double divB_l2(const Field& u);

    /// out = B* gradc(p)  (approximates B* grad p; what the momentum eq uses)
    void pressure_force(const CellField& p, Field& out);

    SolveStats project(Field& u, CellField* p_out = nullptr);

    const SolveStats& last_stats() const { return stats_; }

  private:
    void applyBt_gcT(const CellField& p, Field& vel);  // vel = restrict(B* G^T p)
    void restrict_walls(Field& vel);
    void apply_DDt(const double* p, double* out);
    void precond(const double* r, double* z);
    void build_preconditioner();

    Ops* ops_;
    const Grid* g_;
    PlaneB B_;
    ProjectorBc bc_;
    double rtol_, atol_;
    int maxiter_;
    SolveStats stats_;

    Fft2D fft_;
    // Thomas factors per mode: lower multipliers, modified diagonal, super
    std::vector<double> tri_m_, tri_d_, tri_c_;
    // scratch
    Field vel_;
    CellField cwork_;
    std::vector<double> n1_, n2v_, n3v_;
    std::vector<std::complex<double>> spec_;
};

} // namespace invlab
