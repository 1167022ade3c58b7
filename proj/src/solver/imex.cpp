#include "invlab/solver/imex.hpp"

#include <cmath>
#include <cstring>

#include "invlab/core/ops1d.hpp"
#include "invlab/simd/kernels.hpp"

namespace invlab {

namespace {
PlaneB make_planeB(const Grid& g, const FlatteningMap* geom) {
    PlaneB B;
    if (!geom || geom->profile.kind() == ProfileKind::Flat) return B;
    B.b31.resize(g.plane());
    B.b32.resize(g.plane());
    for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i1 = 0; i1 < g.n1; ++i1) {
            auto m = matrices_at(*geom, g.x1(i1), g.x2(i2));
            B.b31[std::size_t(i2) * g.n1 + i1] = m.B[2][0];
            B.b32[std::size_t(i2) * g.n1 + i1] = m.B[2][1];
        }
    return B;
}
} // namespace

NseSolver::NseSolver(const Grid& grid, const FlatteningMap* geom,
                     const ViscositySpec& visc, double dt, double cg_rtol,
                     double cg_atol, int cg_maxit)
    : grid_(&grid),
      geom_(geom),
      visc_(&visc),
      ops_(grid),
      B_(make_planeB(grid, geom)),
      proj_(ops_, make_planeB(grid, geom), ProjectorBc::NoSlip, cg_rtol, cg_atol,
            cg_maxit),
      norms_(ops_),
      pfft_(grid.n1, grid.n2, grid.P),
      dt_(dt),
      rtol_(cg_rtol),
      atol_(cg_atol),
      maxit_(cg_maxit),
      u_(grid, 3),
      u_prev_(grid, 3),
      p_(grid),
      Ncur_(grid, 3),
      Nprev_(grid, 3),
      rhs_(grid, 3),
      tmp_(grid, 3),
      cg_r_(grid, 3),
      cg_z_(grid, 3),
      cg_p_(grid, 3),
      cg_Ap_(grid, 3),
      lambda_(grid) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const std::size_t nc = grid.cells();
    const std::size_t nn = grid.nodes();
    c1_.resize(nc); c2_.resize(nc); c3_.resize(nc);
    s1_.resize(nc); s2_.resize(nc); s3_.resize(nc);
    d1_.resize(nn); d2_.resize(nn); d3_.resize(nn);
    nwork_.resize(nn * 4);
    dspec_.resize(std::size_t(grid.n1 / 2 + 1) * grid.n2 * (grid.n3 + 1));
    sample_cellA();
    build_diff_precond();
}

double NseSolver::flip_sign(double t) const {
    const double period = 0.1;
    return (((long long)std::floor(t / period)) & 1) ? -1.0 : 1.0;
}

void NseSolver::set_state(const Field& u, double t) {
    u_ = u;
    u_.zero_walls();
    u_.set_time(t);
    t_ = t;
    nstep_ = 0;
    have_prev_ = false;
    p_.fill(0.0);
}

void NseSolver::sample_cellA() {
    const Grid& g = *grid_;
    const std::size_t nc = g.cells();
    for (int e = 0; e < 6; ++e) {
        Abase_[e].assign(nc, 0.0);
        Apert_[e].assign(nc, 0.0);
    }
    const double flip_t = 0.1;  // one interval later the pattern is negated
    for (int j = 0; j < g.n3; ++j) {
        for (int i2 = 0; i2 < g.n2; ++i2) {
            for (int i1 = 0; i1 < g.n1; ++i1) {
                const double x1 = g.x1(i1), x2 = g.x2(i2);
                const double x3 = g.yc[j] + (geom_ ? geom_->height(x1, x2) : 0.0);
                double Ap[3][3], Am[3][3];
                visc_->a0(0.0, x1, x2, x3, Ap);
                visc_->a0(flip_t, x1, x2, x3, Am);
                double b31 = 0.0, b32 = 0.0;
                if (!B_.flat()) {
                    b31 = B_.b31[std::size_t(i2) * g.n1 + i1];
                    b32 = B_.b32[std::size_t(i2) * g.n1 + i1];
                }
                auto compose = [&](const double M[3][3], double out[6]) {
                    double Bm[3][3];
                    for (int c = 0; c < 3; ++c) {
                        Bm[0][c] = M[0][c];
                        Bm[1][c] = M[1][c];
                        Bm[2][c] = b31 * M[0][c] + b32 * M[1][c] + M[2][c];
                    }
                    double A[3][3];
                    for (int r = 0; r < 3; ++r) {
                        A[r][0] = Bm[r][0];
                        A[r][1] = Bm[r][1];
                        A[r][2] = b31 * Bm[r][0] + b32 * Bm[r][1] + Bm[r][2];
                    }
                    out[0] = A[0][0];
                    out[1] = A[1][1];
                    out[2] = A[2][2];
                    out[3] = A[0][1];
                    out[4] = A[0][2];
                    out[5] = A[1][2];
                };
                double base[3][3], pert[3][3];
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) {
                        base[a][b] = 0.5 * (Ap[a][b] + Am[a][b]);
                        pert[a][b] = 0.5 * (Ap[a][b] - Am[a][b]);
                    }
                double ob[6], op[6];
                compose(base, ob);
                compose(pert, op);
                const std::size_t idx = (std::size_t(j) * g.n2 + i2) * g.n1 + i1;
                for (int e = 0; e < 6; ++e) {
                    Abase_[e][idx] = ob[e];
                    Apert_[e][idx] = op[e];
                }
            }
        }
    }
}

void NseSolver::apply_L(double s, const Field& u, Field& out) {
    const Grid& g = *grid_;
    const std::size_t nc = g.cells();
    for (int m = 0; m < 3; ++m) {
        ops_.gc12(u.comp(m), c1_.data(), c2_.data());
        ops_.gc(u.comp(m), 3, c3_.data());
        for (std::size_t i = 0; i < nc; ++i) {
            const double a11 = Abase_[0][i] + s * Apert_[0][i];
            const double a22 = Abase_[1][i] + s * Apert_[1][i];
            const double a33 = Abase_[2][i] + s * Apert_[2][i];
            const double a12 = Abase_[3][i] + s * Apert_[3][i];
            const double a13 = Abase_[4][i] + s * Apert_[4][i];
            const double a23 = Abase_[5][i] + s * Apert_[5][i];
            const double g1 = c1_[i], g2 = c2_[i], g3 = c3_[i];
            s1_[i] = a11 * g1 + a12 * g2 + a13 * g3;
            s2_[i] = a12 * g1 + a22 * g2 + a23 * g3;
            s3_[i] = a13 * g1 + a23 * g2 + a33 * g3;
        }
        ops_.gcT12_add(s1_.data(), s2_.data(), out.comp(m));
        ops_.gcT(s3_.data(), 3, d1_.data());
        simd::axpy(1.0, d1_.data(), out.comp(m), g.nodes());
    }
    out.zero_walls();
}

double NseSolver::dissipation(double s, const Field& a, const Field& b) {
    const Grid& g = *grid_;
    const std::size_t pl = g.plane();
    double total = 0.0;
    const bool same = (&a == &b);
    // d1_..d3_ are node-sized (>= cell size); reuse as cell scratch for b
    double* e1 = d1_.data();
    double* e2 = d2_.data();
    double* e3 = d3_.data();
    for (int m = 0; m < 3; ++m) {
        ops_.gc12(a.comp(m), c1_.data(), c2_.data());
        ops_.gc(a.comp(m), 3, c3_.data());
        const double *b1, *b2, *b3;
        if (same) {
            b1 = c1_.data(); b2 = c2_.data(); b3 = c3_.data();
        } else {
            ops_.gc12(b.comp(m), e1, e2);
            ops_.gc(b.comp(m), 3, e3);
            b1 = e1; b2 = e2; b3 = e3;
        }
        for (int j = 0; j < g.n3; ++j) {
            double slab = 0.0;
            for (std::size_t i = j * pl; i < (j + 1) * pl; ++i) {
                const double a11 = Abase_[0][i] + s * Apert_[0][i];
                const double a22 = Abase_[1][i] + s * Apert_[1][i];
                const double a33 = Abase_[2][i] + s * Apert_[2][i];
                const double a12 = Abase_[3][i] + s * Apert_[3][i];
                const double a13 = Abase_[4][i] + s * Apert_[4][i];
                const double a23 = Abase_[5][i] + s * Apert_[5][i];
                slab += (a11 * c1_[i] + a12 * c2_[i] + a13 * c3_[i]) * b1[i] +
                        (a12 * c1_[i] + a22 * c2_[i] + a23 * c3_[i]) * b2[i] +
                        (a13 * c1_[i] + a23 * c2_[i] + a33 * c3_[i]) * b3[i];
            }
            total += g.wc[j] * slab;
        }
    }
    return total * g.area_weight();
}

double NseSolver::grad_energy(const Field& u) {
    const Grid& g = *grid_;
    const std::size_t pl = g.plane();
    double total = 0.0;
    for (int m = 0; m < 3; ++m) {
        ops_.gc12(u.comp(m), c1_.data(), c2_.data());
        ops_.gc(u.comp(m), 3, c3_.data());
        for (int j = 0; j < g.n3; ++j)
            total += g.wc[j] * (simd::sumsq(c1_.data() + j * pl, pl) +
                                simd::sumsq(c2_.data() + j * pl, pl) +
                                simd::sumsq(c3_.data() + j * pl, pl));
    }
    return total * g.area_weight();
}

void NseSolver::apply_N(const Field& a, const Field& b, Field& out) {
    const Grid& g = *grid_;
    const std::size_t nn = g.nodes();
    double* ba3 = nwork_.data();
    double* f = nwork_.data() + nn;
    double* h = nwork_.data() + 2 * nn;
    double* divf = nwork_.data() + 3 * nn;

    const double* ba1 = a.comp(0);
    const double* ba2 = a.comp(1);
    std::memcpy(ba3, a.comp(2), nn * sizeof(double));
    if (!B_.flat()) {
        const std::size_t pl = g.plane();
        for (int j = 0; j <= g.n3; ++j) {
            double* o = ba3 + j * pl;
            const double* a1 = a.comp(0) + j * pl;
            const double* a2 = a.comp(1) + j * pl;
            for (std::size_t i = 0; i < pl; ++i)
                o[i] += B_.b31[i] * a1[i] + B_.b32[i] * a2[i];
        }
    }

    for (int m = 0; m < 3; ++m) {
        const double* bm = b.comp(m);
        ops_.deriv12_node(bm, d1_.data(), d2_.data());
        ops_.deriv_node(bm, 3, d3_.data());
        double* o = out.comp(m);
        for (std::size_t i = 0; i < nn; ++i)
            o[i] = ba1[i] * d1_[i] + ba2[i] * d2_[i] + ba3[i] * d3_[i];
        simd::mul(f, ba1, bm, nn);
        simd::mul(h, ba2, bm, nn);
        ops_.div12_add(f, h, divf);
        simd::mul(f, ba3, bm, nn);
        ops_.deriv_node(f, 3, d3_.data());
        simd::axpy(1.0, d3_.data(), divf, nn);
        for (std::size_t i = 0; i < nn; ++i) o[i] = 0.5 * (o[i] + divf[i]);
    }
}

void NseSolver::build_diff_precond() {
    const Grid& g = *grid_;
    const int K1 = pfft_.nk1();
    const int nmodes = K1 * g.n2;
    const int ni = g.n3 - 1;
    dtri_m_.assign(std::size_t(nmodes) * ni, 0.0);
    dtri_d_.assign(std::size_t(nmodes) * ni, 0.0);
    dtri_c_.assign(std::size_t(nmodes) * ni, 0.0);
    const double eta = visc_->eta(), nu = visc_->nu();

    std::vector<double> e(g.n3 + 1), q(g.n3), t(g.n3 + 1), t3(g.n3 + 1),
        col(g.n3 + 1);
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < K1; ++m1) {
            const double k2 = pfft_.k1(m1) * pfft_.k1(m1) + pfft_.k2(m2) * pfft_.k2(m2);
            std::vector<double> a(ni, 0.0), bdiag(ni, 0.0), c(ni, 0.0);
            for (int jc = 1; jc < g.n3; ++jc) {
                std::fill(e.begin(), e.end(), 0.0);
                e[jc] = 1.0;
                ops1d::avg(g, e.data(), q.data());
                ops1d::avgT(g, q.data(), t.data());
                ops1d::g3(g, e.data(), q.data());
                ops1d::g3T(g, q.data(), t3.data());
                for (int j = 1; j < g.n3; ++j)
                    col[j] = e[j] + 0.5 * dt_ * (eta * k2 * t[j] + nu * t3[j]);
                const int r = jc - 1;
                if (r > 0) c[r - 1] = col[jc - 1];
                bdiag[r] = col[jc];
                if (r < ni - 1) a[r + 1] = col[jc + 1];
            }
            double* M = dtri_m_.data() + std::size_t(m2 * K1 + m1) * ni;
            double* D = dtri_d_.data() + std::size_t(m2 * K1 + m1) * ni;
            double* C = dtri_c_.data() + std::size_t(m2 * K1 + m1) * ni;
            D[0] = bdiag[0];
            C[0] = c[0];
            for (int j = 1; j < ni; ++j) {
                M[j] = a[j] / D[j - 1];
                D[j] = bdiag[j] - M[j] * c[j - 1];
                C[j] = c[j];
            }
        }
    }
}

void NseSolver::diff_precond_apply(Field& r) {
    const Grid& g = *grid_;
    const int K1 = pfft_.nk1();
    const std::size_t nspec = std::size_t(K1) * g.n2;
    const std::size_t pl = g.plane();
    const int ni = g.n3 - 1;
    for (int m = 0; m < 3; ++m) {
        double* rm = r.comp(m);
        for (int j = 1; j < g.n3; ++j) {
            pfft_.forward(rm + j * pl);
            std::memcpy(dspec_.data() + std::size_t(j - 1) * nspec, pfft_.spec(),
                        nspec * sizeof(dspec_[0]));
        }
        for (std::size_t mi = 0; mi < nspec; ++mi) {
            const double* M = dtri_m_.data() + mi * ni;
            const double* D = dtri_d_.data() + mi * ni;
            const double* C = dtri_c_.data() + mi * ni;
            std::complex<double>* x = dspec_.data() + mi;
            for (int j = 1; j < ni; ++j) x[j * nspec] -= M[j] * x[(j - 1) * nspec];
            x[(ni - 1) * nspec] /= D[ni - 1];
            for (int j = ni - 2; j >= 0; --j)
                x[j * nspec] = (x[j * nspec] - C[j] * x[(j + 1) * nspec]) / D[j];
        }
        for (int j = 1; j < g.n3; ++j) {
            std::memcpy(pfft_.spec(), dspec_.data() + std::size_t(j - 1) * nspec,
                        nspec * sizeof(dspec_[0]));
            pfft_.inverse(rm + j * pl);
        }
        std::fill(rm, rm + pl, 0.0);
        std::fill(rm + std::size_t(g.n3) * pl, rm + std::size_t(g.n3) * pl + pl, 0.0);
    }
}

void NseSolver::helmholtz_solve(double s, Field& x, const Field& rhs, int& iters) {
    auto inner = [&](const Field& a, const Field& b) {
        double v = 0.0;
        for (int c = 0; c < 3; ++c) v += ops_.inner_node(a.comp(c), b.comp(c));
        return v;
    };

    x.fill(0.0);
    cg_r_ = rhs;
    cg_r_.zero_walls();
    const double bnorm = std::sqrt(inner(cg_r_, cg_r_));
    const double tol = std::max(atol_, rtol_ * bnorm);
    iters = 0;
    if (bnorm <= tol) return;
    cg_z_ = cg_r_;
    diff_precond_apply(cg_z_);
    cg_p_ = cg_z_;
    double rz = inner(cg_r_, cg_z_);
    for (int it = 1; it <= maxit_; ++it) {
        apply_L(s, cg_p_, cg_Ap_);
        simd::xpby(cg_p_.data(), 0.5 * dt_, cg_Ap_.data(), cg_Ap_.size());
        double pAp = inner(cg_p_, cg_Ap_);
        if (pAp <= 0.0) break;
        double alpha = rz / pAp;
        simd::axpy(alpha, cg_p_.data(), x.data(), x.size());
        simd::axpy(-alpha, cg_Ap_.data(), cg_r_.data(), cg_r_.size());
        double rnorm = std::sqrt(inner(cg_r_, cg_r_));
        iters = it;
        if (rnorm <= tol) return;
        cg_z_ = cg_r_;
        diff_precond_apply(cg_z_);
        double rz_new = inner(cg_r_, cg_z_);
        simd::xpby(cg_z_.data(), rz_new / rz, cg_p_.data(), cg_p_.size());
        rz = rz_new;
    }
    throw StepError("implicit diffusion solve did not converge");
}

void NseSolver::eval_forcing(double t, Field& out) {
    out.fill(0.0);
    if (forcing_.fields.empty()) return;
    forcing_.coeffs(t, fcoef_);
    for (std::size_t i = 0; i < forcing_.fields.size(); ++i)
        if (fcoef_[i] != 0.0)
            simd::axpy(fcoef_[i], forcing_.fields[i].data(), out.data(), out.size());
}

StepDiagnostics NseSolver::step() {
    const Grid& g = *grid_;
    const double t0 = t_, t1 = t_ + dt_, tm = t_ + 0.5 * dt_;
    const double s0 = flip_sign(t0), s1 = flip_sign(t1);

    double umax = 0.0;
    for (int c = 0; c < 3; ++c) umax = std::max(umax, ops_.max_abs_node(u_.comp(c)));
    {
        const std::size_t pl = g.plane();
        double vert = 0.0;
        for (int j = 1; j < g.n3; ++j)
            vert = std::max(vert, simd::max_abs(u_.comp(2) + j * pl, pl) / g.wn[j]);
        double cfl = dt_ * (umax / g.h1() + umax / g.h2() + vert);
        if (cfl > 1.0)
            throw StepError("advective CFL violated", 0.8 * dt_ / cfl);
    }

    apply_N(u_, u_, Ncur_);
    const double c0 = have_prev_ ? 1.5 : 1.0;
    const double c1 = have_prev_ ? -0.5 : 0.0;

    apply_L(s0, u_, rhs_);
    simd::scale(-0.5 * dt_, rhs_.data(), rhs_.size());
    simd::axpy(1.0, u_.data(), rhs_.data(), rhs_.size());
    simd::axpy(-dt_ * c0, Ncur_.data(), rhs_.data(), rhs_.size());
    if (c1 != 0.0) simd::axpy(-dt_ * c1, Nprev_.data(), rhs_.data(), rhs_.size());
    if (!forcing_.fields.empty()) {
        eval_forcing(tm, tmp_);
        simd::axpy(dt_, tmp_.data(), rhs_.data(), rhs_.size());
    }
    proj_.pressure_force(p_, tmp_);
    simd::axpy(-dt_, tmp_.data(), rhs_.data(), rhs_.size());
    rhs_.zero_walls();

    StepDiagnostics diag;
    diag.t = t1;
    diag.umax = umax;
    // reuse u_prev_ as u* storage; the previous level is still in u_
    helmholtz_solve(s1, u_prev_, rhs_, diag.diffusion_iters);

    auto st = proj_.project(u_prev_, &lambda_);
    if (!st.converged) throw StepError("projection solve did not converge");
    diag.projection_iters = st.iters;

    simd::axpy(1.0 / dt_, lambda_.data(), p_.data(), p_.size());

    diag.divBu = proj_.divB_l2(u_prev_);
    double cancel = 0.0;
    for (int c = 0; c < 3; ++c) cancel += ops_.inner_node(Ncur_.comp(c), u_.comp(c));
    diag.adv_cancel = std::fabs(cancel);
    {
        CellField d(g);
        proj_.divB(u_prev_, d);
        diag.press_cancel = std::fabs(ops_.inner_cell(p_.data(), d.data()));
    }

    std::swap(u_, u_prev_);  // u_ <- u^{n+1}, u_prev_ <- u^n
    u_.set_time(t1);
    std::swap(Nprev_, Ncur_);
    t_ = t1;
    ++nstep_;
    have_prev_ = true;

    if (observer_) {
        StepRecord rec;
        rec.n = nstep_;
        rec.t0 = t0;
        rec.t1 = t1;
        rec.dt = dt_;
        rec.u0 = &u_prev_;
        rec.u1 = &u_;
        rec.lambda = &lambda_;
        rec.p_total = &p_;
        rec.s0 = s0;
        rec.s1 = s1;
        rec.diag = &diag;
        observer_(rec);
    }
    return diag;
}

} // namespace invlab
