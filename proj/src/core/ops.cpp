#include "invlab/core/ops.hpp"

#include <cstring>

#include "invlab/simd/kernels.hpp"

namespace invlab {

Ops::Ops(const Grid& g) : g_(&g), fft_(g.n1, g.n2, g.P) {
    scratch_.resize(g.nodes());
    scratch2_.resize(g.nodes());
    spec_save_.resize(fft_.nspec());
}

void Ops::deriv_node(const double* in, int dir, double* out) {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    if (dir == 1 || dir == 2) {
        for (int j = 0; j <= g.n3; ++j) {
            fft_.forward(in + j * pl);
            fft_.apply_ik(dir);
            fft_.inverse(out + j * pl);
        }
        return;
    }
    // mapped centered: f' = (1/S') df/dsigma
    const double inv2h = 1.0 / (2.0 * g.hs);
    for (int j = 1; j < g.n3; ++j) {
        const double c = inv2h / g.dsn[j];
        const double* up = in + (j + 1) * pl;
        const double* dn = in + (j - 1) * pl;
        double* o = out + j * pl;
        for (std::size_t i = 0; i < pl; ++i) o[i] = c * (up[i] - dn[i]);
    }
    // one-sided second-order closures
    {
        const double c = inv2h / g.dsn[0];
        const double *f0 = in, *f1 = in + pl, *f2 = in + 2 * pl;
        for (std::size_t i = 0; i < pl; ++i)
            out[i] = c * (-3.0 * f0[i] + 4.0 * f1[i] - f2[i]);
    }
    {
        const double c = inv2h / g.dsn[g.n3];
        const double* f0 = in + g.n3 * pl;
        const double* f1 = in + (g.n3 - 1) * pl;
        const double* f2 = in + (g.n3 - 2) * pl;
        double* o = out + g.n3 * pl;
        for (std::size_t i = 0; i < pl; ++i)
            o[i] = c * (3.0 * f0[i] - 4.0 * f1[i] + f2[i]);
    }
}

void Ops::deriv12_node(const double* in, double* out1, double* out2) {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    for (int j = 0; j <= g.n3; ++j) {
        fft_.forward(in + j * pl);
        std::memcpy(spec_save_.data(), fft_.spec(), spec_save_.size() * sizeof(spec_save_[0]));
        fft_.apply_ik(1);
        fft_.inverse(out1 + j * pl);
        std::memcpy(fft_.spec(), spec_save_.data(), spec_save_.size() * sizeof(spec_save_[0]));
        fft_.apply_ik(2);
        fft_.inverse(out2 + j * pl);
    }
}

void Ops::avg(const double* node, double* cell) const {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    for (int j = 0; j < g.n3; ++j) {
        const double* a = node + j * pl;
        const double* b = node + (j + 1) * pl;
        double* o = cell + j * pl;
        for (std::size_t i = 0; i < pl; ++i) o[i] = 0.5 * (a[i] + b[i]);
    }
}

void Ops::avgT(const double* cell, double* node) const {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    for (int k = 0; k <= g.n3; ++k) {
        double* o = node + k * pl;
        const double lo = (k > 0) ? 0.5 * g.wc[k - 1] / g.wn[k] : 0.0;
        const double hi = (k < g.n3) ? 0.5 * g.wc[k] / g.wn[k] : 0.0;
        const double* ql = (k > 0) ? cell + (k - 1) * pl : nullptr;
        const double* qh = (k < g.n3) ? cell + k * pl : nullptr;
        for (std::size_t i = 0; i < pl; ++i) {
            double v = 0.0;
            if (ql) v += lo * ql[i];
            if (qh) v += hi * qh[i];
            o[i] = v;
        }
    }
}

void Ops::gc(const double* node, int dir, double* cell) {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    if (dir == 3) {
        for (int j = 0; j < g.n3; ++j) {
            const double c = 1.0 / g.wc[j];
            const double* a = node + j * pl;
            const double* b = node + (j + 1) * pl;
            double* o = cell + j * pl;
            for (std::size_t i = 0; i < pl; ++i) o[i] = c * (b[i] - a[i]);
        }
        return;
    }
    deriv_node(node, dir, scratch_.data());
    avg(scratch_.data(), cell);
}

void Ops::gc12(const double* node, double* cell1, double* cell2) {
    deriv12_node(node, scratch_.data(), scratch2_.data());
    avg(scratch_.data(), cell1);
    avg(scratch2_.data(), cell2);
}

void Ops::gcT(const double* cell, int dir, double* node) {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    if (dir == 3) {
        // (G3^T q)_k = (q_{k-1} - q_k)/wn_k, boundary rows one-sided
        for (int k = 0; k <= g.n3; ++k) {
            double* o = node + k * pl;
            const double* ql = (k > 0) ? cell + (k - 1) * pl : nullptr;
            const double* qh = (k < g.n3) ? cell + k * pl : nullptr;
            const double c = 1.0 / g.wn[k];
            for (std::size_t i = 0; i < pl; ++i) {
                double v = 0.0;
                if (ql) v += ql[i];
                if (qh) v -= qh[i];
                o[i] = c * v;
            }
        }
        return;
    }
    // G1^T = -D1 (Avg^T q)
    avgT(cell, scratch_.data());
    deriv_node(scratch_.data(), dir, node);
    simd::scale(-1.0, node, g.nodes());
}

void Ops::div12_add(const double* f, const double* g, double* out) {
    const Grid& gr = *g_;
    const std::size_t pl = gr.plane();
    for (int j = 0; j <= gr.n3; ++j) {
        fft_.forward(f + j * pl);
        fft_.apply_ik(1);
        std::memcpy(spec_save_.data(), fft_.spec(), spec_save_.size() * sizeof(spec_save_[0]));
        fft_.forward(g + j * pl);
        fft_.apply_ik(2);
        for (std::size_t i = 0; i < spec_save_.size(); ++i) fft_.spec()[i] += spec_save_[i];
        fft_.inverse(out + j * pl);
    }
}

void Ops::gcT12_add(const double* cell1, const double* cell2, double* node) {
    // gcT(c, dir) = -D_dir(AvgT c); fuse the two spectral derivatives
    avgT(cell1, scratch_.data());
    avgT(cell2, scratch2_.data());
    div12_add(scratch_.data(), scratch2_.data(), node);
    simd::scale(-1.0, node, g_->nodes());
}

double Ops::integral_node(const double* node) const {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    double s = 0.0;
    for (int j = 0; j <= g.n3; ++j) {
        double slab = 0.0;
        const double* a = node + j * pl;
        for (std::size_t i = 0; i < pl; ++i) slab += a[i];
        s += g.wn[j] * slab;
    }
    return s * g.area_weight();
}

double Ops::l2sq_node(const double* node) const {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    double s = 0.0;
    for (int j = 0; j <= g.n3; ++j)
        s += g.wn[j] * simd::sumsq(node + j * pl, pl);
    return s * g.area_weight();
}

double Ops::l2sq_node_weighted(const double* node, double gamma) const {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    double s = 0.0;
    for (int j = 0; j <= g.n3; ++j) {
        double w = g.wn[j] * std::pow(g.y[j], gamma);
        if (w != 0.0) s += w * simd::sumsq(node + j * pl, pl);
    }
    return s * g.area_weight();
}

double Ops::inner_node(const double* a, const double* b) const {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    double s = 0.0;
    for (int j = 0; j <= g.n3; ++j)
        s += g.wn[j] * simd::dot(a + j * pl, b + j * pl, pl);
    return s * g.area_weight();
}

double Ops::l2sq_cell(const double* cell) const {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    double s = 0.0;
    for (int j = 0; j < g.n3; ++j)
        s += g.wc[j] * simd::sumsq(cell + j * pl, pl);
    return s * g.area_weight();
}

double Ops::inner_cell(const double* a, const double* b) const {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    double s = 0.0;
    for (int j = 0; j < g.n3; ++j)
        s += g.wc[j] * simd::dot(a + j * pl, b + j * pl, pl);
    return s * g.area_weight();
}

double Ops::max_abs_node(const double* node) const {
    return simd::max_abs(node, g_->nodes());
}

double Ops::max_abs_weighted_node(const double* node, double gamma) const {
    const Grid& g = *g_;
    const std::size_t pl = g.plane();
    double m = 0.0;
    for (int j = 0; j <= g.n3; ++j) {
        double w = std::pow(g.y[j], gamma);
        if (w != 0.0) m = std::max(m, w * simd::max_abs(node + j * pl, pl));
    }
    return m;
}

} // namespace invlab
