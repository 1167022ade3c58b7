#pragma once
#include <functional>
#include <memory>
#include <vector>

#include "invlab/core/fft2d.hpp"
#include "invlab/core/norms.hpp"
#include "invlab/core/ops.hpp"
#include "invlab/core/project.hpp"
#include "invlab/geom/profile.hpp"
#include "invlab/solver/viscosity.hpp"

namespace invlab {

struct StepError : std::runtime_error {
    explicit StepError(const std::string& what, double suggested = 0.0)
        : std::runtime_error(what), suggested_dt(suggested) {}
    double suggested_dt = 0.0;
};

struct StepDiagnostics {
    double t = 0.0;
    double divBu = 0.0;        // L2 of div(B u^{n+1})
    double adv_cancel = 0.0;   // |<N(u,u), u>| (skew identity)
    double press_cancel = 0.0; // |<p, div(B u^{n+1})>|
    double umax = 0.0;
    int diffusion_iters = 0;
    int projection_iters = 0;
};

/// Data handed to the per-step observer (the energy-audit hooks).
struct StepRecord {
    int n = 0;
    double t0 = 0.0, t1 = 0.0, dt = 0.0;
    const Field* u0 = nullptr;      // u^n
    const Field* u1 = nullptr;      // u^{n+1}
    const CellField* lambda = nullptr;   // projection increment (dt * pressure jump)
    const CellField* p_total = nullptr;  // accumulated pressure at n+1/2
    double s0 = 1.0, s1 = 1.0;           // checkerboard flip signs at t0, t1
    const StepDiagnostics* diag = nullptr;
};

using StepObserver = std::function<void(const StepRecord&)>;

/// Forcing of the form F(t) = sum_i coeff_i(t) * fields_i (closed-form
/// reference forcings decompose this way, which keeps sampling off the
/// per-step critical path).
struct LinearForcing {
    std::vector<Field> fields;
    std::function<void(double, std::vector<double>&)> coeffs;
};

/// Time integration of the flattened anisotropic system
///   du/dt + (Bu . grad) u - div[A grad u] + B* grad p = F,  div(Bu) = 0,
/// with A = B A0 B* sampled at cell centers: Crank--Nicolson diffusion,
/// Adams--Bashforth-2 advection in skew form, incremental pressure
/// projection restricted to interior nodes (no-slip exact at the walls).
class NseSolver {
  public:
    NseSolver(const Grid& grid, const FlatteningMap* geom, const ViscositySpec& visc,
              double dt, double cg_rtol = 1e-10, double cg_atol = 1e-13,
              int cg_maxit = 10000);

    const Grid& grid() const { return *grid_; }
    Ops& ops() { return ops_; }
    Projector& projector() { return proj_; }
    const PlaneB& planeB() const { return B_; }

    void set_forcing(LinearForcing f) { forcing_ = std::move(f); }
    void set_state(const Field& u, double t);
    const Field& u() const { return u_; }
    const CellField& pressure() const { return p_; }
    double time() const { return t_; }
    double dt() const { return dt_; }

    void set_observer(StepObserver obs) { observer_ = std::move(obs); }

    StepDiagnostics step();

    /// advection operator in skew form, N(a,b) = ((Ba).grad b + div(Ba x b))/2;
    /// out must alias neither input
    void apply_N(const Field& a, const Field& b, Field& out);
    /// diffusion operator out_m = sum_i gcT_i( A_ij gc_j u_m ), walls zeroed;
    /// s is the checkerboard flip sign
    void apply_L(double s, const Field& u, Field& out);
    /// dissipation quadrature <A grad a, grad b> at flip sign s
    double dissipation(double s, const Field& a, const Field& b);
    /// plain gradient energy <grad u, grad u>
    double grad_energy(const Field& u);

    double flip_sign(double t) const;

  private:
    void sample_cellA();
    void build_diff_precond();
    void helmholtz_solve(double s, Field& x, const Field& rhs, int& iters);
    void diff_precond_apply(Field& r);
    void eval_forcing(double t, Field& out);

    const Grid* grid_;
    const FlatteningMap* geom_;
    const ViscositySpec* visc_;
    Ops ops_;
    PlaneB B_;
    Projector proj_;
    Norms norms_;
    Fft2D pfft_;
    double dt_, rtol_, atol_;
    int maxit_;

    Field u_, u_prev_;
    CellField p_;
    double t_ = 0.0;
    int nstep_ = 0;
    bool have_prev_ = false;

    LinearForcing forcing_;
    std::vector<double> fcoef_;
    StepObserver observer_;

    // A(t) = A_base + s(t) A_pert at cells; six symmetric entries each
    std::vector<double> Abase_[6], Apert_[6];
    // diffusion preconditioner factors (Thomas) per mode, interior nodes
    std::vector<double> dtri_m_, dtri_d_, dtri_c_;
    std::vector<std::complex<double>> dspec_;

    // step workspace
    Field Ncur_, Nprev_, rhs_, tmp_, cg_r_, cg_z_, cg_p_, cg_Ap_;
    CellField lambda_;
    std::vector<double> c1_, c2_, c3_, s1_, s2_, s3_, d1_, d2_, d3_, nwork_;
};

} // namespace invlab
