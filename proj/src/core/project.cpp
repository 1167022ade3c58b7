#include "invlab/core/project.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "invlab/core/ops1d.hpp"
#include "invlab/simd/kernels.hpp"

namespace invlab {

Projector::Projector(Ops& ops, PlaneB B, ProjectorBc bc, double rtol, double atol,
                     int maxiter)
    : ops_(&ops),
      g_(&ops.grid()),
      B_(std::move(B)),
      bc_(bc),
      rtol_(rtol),
      atol_(atol),
      maxiter_(maxiter),
      fft_(g_->n1, g_->n2, g_->P),
      vel_(*g_, 3),
      cwork_(*g_) {
    n1_.resize(g_->nodes());
    n2v_.resize(g_->nodes());
    n3v_.resize(g_->nodes());
    spec_.resize(std::size_t(fft_.nk1()) * g_->n2 * g_->n3);
    build_preconditioner();
}

void Projector::divB(const Field& u, CellField& out) {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    const std::size_t nn = g.nodes();
    // (Bu)_3 = b31 u1 + b32 u2 + u3
    std::memcpy(n3v_.data(), u.comp(2), nn * sizeof(double));
    if (!B_.flat()) {
        for (int j = 0; j <= g.n3; ++j) {
            double* o = n3v_.data() + j * pl;
            const double* u1 = u.comp(0) + j * pl;
            const double* u2 = u.comp(1) + j * pl;
            for (std::size_t i = 0; i < pl; ++i)
                o[i] += B_.b31[i] * u1[i] + B_.b32[i] * u2[i];
        }
    }
    // out = G1 u1 + G2 u2 + G3 (Bu)_3
    ops_->gc(u.comp(0), 1, out.data());
    ops_->gc(u.comp(1), 2, cwork_.data());
    simd::axpy(1.0, cwork_.data(), out.data(), g.cells());
    ops_->gc(n3v_.data(), 3, cwork_.data());
    simd::axpy(1.0, cwork_.data(), out.data(), g.cells());
}

double Projector::divB_l2(const Field& u) {
    CellField d(*g_);
    divB(u, d);
    return std::sqrt(ops_->l2sq_cell(d.data()));
}

void Projector::applyBt_gcT(const CellField& p, Field& vel) {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    ops_->gcT(p.data(), 1, vel.comp(0));
    ops_->gcT(p.data(), 2, vel.comp(1));
    ops_->gcT(p.data(), 3, vel.comp(2));
    if (!B_.flat()) {
        // B* t = (t1 + b31 t3, t2 + b32 t3, t3)
        for (int j = 0; j <= g.n3; ++j) {
            double* t1 = vel.comp(0) + j * pl;
            double* t2 = vel.comp(1) + j * pl;
            const double* t3 = vel.comp(2) + j * pl;
            for (std::size_t i = 0; i < pl; ++i) {
                t1[i] += B_.b31[i] * t3[i];
                t2[i] += B_.b32[i] * t3[i];
            }
        }
    }
    // keep corrections out of the constrained DOFs
    restrict_walls(vel);
}

// Orthogonal projection of the wall rows onto the admissible trace space:
// NoSlip zeroes every component; Trace removes the (Bu).e3 flux component,
// i.e. projects out the direction (b31, b32, 1) pointwise.
void Projector::restrict_walls(Field& vel) {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    if (bc_ == ProjectorBc::NoSlip) {
        vel.zero_walls();
        return;
    }
    for (std::size_t row : {std::size_t(0), std::size_t(g.n3) * pl}) {
        double* u1 = vel.comp(0) + row;
        double* u2 = vel.comp(1) + row;
        double* u3 = vel.comp(2) + row;
        if (B_.flat()) {
            std::fill(u3, u3 + pl, 0.0);
        } else {
            for (std::size_t i = 0; i < pl; ++i) {
                const double b1 = B_.b31[i], b2 = B_.b32[i];
                const double s = (b1 * u1[i] + b2 * u2[i] + u3[i]) /
                                 (1.0 + b1 * b1 + b2 * b2);
                u1[i] -= b1 * s;
                u2[i] -= b2 * s;
                u3[i] -= s;
            }
        }
    }
}

void Projector::pressure_force(const CellField& p, Field& out) {
    // B* gradc p = -B* G^T p
    applyBt_gcT(p, out);
    simd::scale(-1.0, out.data(), out.size());
}

void Projector::apply_DDt(const double* p, double* out) {
    const Grid& g = *g_;
    CellField pc(g);
    std::memcpy(pc.data(), p, g.cells() * sizeof(double));
    applyBt_gcT(pc, vel_);
    CellField d(g);
    divB(vel_, d);
    std::memcpy(out, d.data(), g.cells() * sizeof(double));
}

void Projector::build_preconditioner() {
    const Grid& g = *g_;
    const int K1 = fft_.nk1();
    const int nmodes = K1 * g.n2;
    tri_m_.assign(std::size_t(nmodes) * g.n3, 0.0);
    tri_d_.assign(std::size_t(nmodes) * g.n3, 0.0);
    tri_c_.assign(std::size_t(nmodes) * g.n3, 0.0);

    std::vector<double> e(g.n3), col(g.n3), t(g.n3 + 1), t2(g.n3 + 1), q(g.n3);

    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < K1; ++m1) {
            const double k2sq = fft_.k1(m1) * fft_.k1(m1) + fft_.k2(m2) * fft_.k2(m2);
            // column-by-column assembly of q -> k^2 Avg R AvgT q + G3 R G3T q,
            // stored row-major: a[i] = A(i,i-1), b[i] = A(i,i), c[i] = A(i,i+1)
            std::vector<double> a(g.n3, 0.0), b(g.n3, 0.0), c(g.n3, 0.0);
            for (int jc = 0; jc < g.n3; ++jc) {
                std::fill(e.begin(), e.end(), 0.0);
                e[jc] = 1.0;
                ops1d::avgT(g, e.data(), t.data());
                ops1d::g3T(g, e.data(), t2.data());
                t2[0] = t2[g.n3] = 0.0;
                if (bc_ == ProjectorBc::NoSlip) t[0] = t[g.n3] = 0.0;
                ops1d::avg(g, t.data(), q.data());
                for (int j = 0; j < g.n3; ++j) col[j] = k2sq * q[j];
                ops1d::g3(g, t2.data(), q.data());
                for (int j = 0; j < g.n3; ++j) col[j] += q[j];
                if (jc > 0) c[jc - 1] = col[jc - 1];
                b[jc] = col[jc];
                if (jc < g.n3 - 1) a[jc + 1] = col[jc + 1];
            }
            // regularize the singular constant mode
            if (k2sq == 0.0) b[0] += 1.0 / g.map.H;
            // Thomas factorization
            double* M = tri_m_.data() + std::size_t(m2 * K1 + m1) * g.n3;
            double* D = tri_d_.data() + std::size_t(m2 * K1 + m1) * g.n3;
            double* C = tri_c_.data() + std::size_t(m2 * K1 + m1) * g.n3;
            D[0] = b[0];
            C[0] = c[0];
            for (int j = 1; j < g.n3; ++j) {
                M[j] = a[j] / D[j - 1];
                D[j] = b[j] - M[j] * c[j - 1];
                C[j] = c[j];
            }
        }
    }
}

void Projector::precond(const double* r, double* z) {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    const int K1 = fft_.nk1();
    const std::size_t nspec = std::size_t(K1) * g.n2;
    // forward transform every cell slab
    for (int j = 0; j < g.n3; ++j) {
        fft_.forward(r + j * pl);
        std::memcpy(spec_.data() + j * nspec, fft_.spec(), nspec * sizeof(spec_[0]));
    }
    // tridiagonal solve per mode over j (real and imaginary parts together)
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < K1; ++m1) {
            const std::size_t mi = std::size_t(m2) * K1 + m1;
            const double* M = tri_m_.data() + mi * g.n3;
            const double* D = tri_d_.data() + mi * g.n3;
            const double* C = tri_c_.data() + mi * g.n3;
            std::complex<double>* x = spec_.data() + mi;
            // forward sweep
            for (int j = 1; j < g.n3; ++j) x[j * nspec] -= M[j] * x[(j - 1) * nspec];
            x[(g.n3 - 1) * nspec] /= D[g.n3 - 1];
            for (int j = g.n3 - 2; j >= 0; --j)
                x[j * nspec] = (x[j * nspec] - C[j] * x[(j + 1) * nspec]) / D[j];
        }
    }
    for (int j = 0; j < g.n3; ++j) {
        std::memcpy(fft_.spec(), spec_.data() + j * nspec, nspec * sizeof(spec_[0]));
        fft_.inverse(z + j * pl);
    }
}

SolveStats Projector::project(Field& u, CellField* p_out) {
    const Grid& g = *g_;
    const std::size_t n = g.cells();

    // clean the wall trace first (the NoSlip flavor passes wall values
    // through untouched; its callers keep them zero)
    if (bc_ == ProjectorBc::Trace) restrict_walls(u);

    CellField b(g);
    divB(u, b);
    simd::scale(-1.0, b.data(), n);

    // remove the weighted mean (compatibility of the constant mode)
    {
        double vol = 0.0, mean = 0.0;
        const std::size_t pl = g.plane();
        for (int j = 0; j < g.n3; ++j) {
            vol += g.wc[j] * pl;
            const double* bj = b.data() + j * pl;
            double s = 0.0;
            for (std::size_t i = 0; i < pl; ++i) s += bj[i];
            mean += g.wc[j] * s;
        }
        mean /= vol;
        for (int j = 0; j < g.n3; ++j) {
            double* bj = b.data() + j * pl;
            for (std::size_t i = 0; i < pl; ++i) bj[i] -= mean;
        }
    }

    auto cdot = [&](const double* x, const double* y) {
        double s = 0.0;
        const std::size_t pl = g.plane();
        for (int j = 0; j < g.n3; ++j)
            s += g.wc[j] * simd::dot(x + j * pl, y + j * pl, pl);
        return s * g.area_weight();
    };

    CellField x(g), rr(g), z(g), p(g), Ap(g);
    std::memcpy(rr.data(), b.data(), n * sizeof(double));
    const double bnorm = std::sqrt(cdot(b.data(), b.data()));
    const double tol = std::max(atol_, rtol_ * bnorm);

    SolveStats st;
    double rnorm = bnorm;
    if (rnorm > tol) {
        precond(rr.data(), z.data());
        std::memcpy(p.data(), z.data(), n * sizeof(double));
        double rz = cdot(rr.data(), z.data());
        for (int it = 1; it <= maxiter_; ++it) {
            apply_DDt(p.data(), Ap.data());
            double pAp = cdot(p.data(), Ap.data());
            if (pAp <= 0.0) break;
            double alpha = rz / pAp;
            simd::axpy(alpha, p.data(), x.data(), n);
            simd::axpy(-alpha, Ap.data(), rr.data(), n);
            rnorm = std::sqrt(cdot(rr.data(), rr.data()));
            st.iters = it;
            if (rnorm <= tol) {
                st.converged = true;
                break;
            }
            precond(rr.data(), z.data());
            double rz_new = cdot(rr.data(), z.data());
            double beta = rz_new / rz;
            rz = rz_new;
            simd::xpby(z.data(), beta, p.data(), n);
        }
    } else {
        st.converged = true;
    }
    st.residual = rnorm;

    // correction u += D^T x
    applyBt_gcT(x, vel_);
    simd::axpy(1.0, vel_.data(), u.data(), u.size());
    if (p_out) std::memcpy(p_out->data(), x.data(), n * sizeof(double));
    stats_ = st;
    return st;
}

} // namespace invlab
