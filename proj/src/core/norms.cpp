#include "invlab/core/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "invlab/simd/kernels.hpp"

namespace invlab {

NormKind norm_kind_from_string(const std::string& s) {
    if (s == "L2") return NormKind::L2;
    if (s == "Linf") return NormKind::Linf;
    if (s == "H1") return NormKind::H1;
    if (s == "H2") return NormKind::H2;
    if (s == "H3") return NormKind::H3;
    if (s == "weighted-L2-y2") return NormKind::WeightedL2_y2;
    if (s == "trace-L2") return NormKind::TraceL2;
    if (s == "trace-H1") return NormKind::TraceH1;
    throw std::domain_error("unknown norm kind: " + s);
}

double Norms::norm(const Field& f, NormKind kind) {
    switch (kind) {
        case NormKind::L2: return l2(f);
        case NormKind::Linf: return linf(f);
        case NormKind::H1: return hk(f, 1);
        case NormKind::H2: return hk(f, 2);
        case NormKind::H3: return hk(f, 3);
        case NormKind::WeightedL2_y2: return weighted_l2(f, 2.0);
        case NormKind::TraceL2: return trace_l2(f);
        case NormKind::TraceH1: return trace_h1(f);
    }
    throw std::domain_error("unknown norm kind");
}

double Norms::l2sq(const Field& f) {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) s += ops_->l2sq_node(f.comp(c));
    return s;
}

double Norms::l2(const Field& f) { return std::sqrt(l2sq(f)); }

double Norms::linf(const Field& f) {
    double m = 0.0;
    for (int c = 0; c < f.ncomp(); ++c)
        m = std::max(m, ops_->max_abs_node(f.comp(c)));
    return m;
}

double Norms::weighted_l2(const Field& f, double gamma) {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c)
        s += ops_->l2sq_node_weighted(f.comp(c), gamma);
    return std::sqrt(s);
}

double Norms::weighted_linf(const Field& f, double gamma) {
    double m = 0.0;
    for (int c = 0; c < f.ncomp(); ++c)
        m = std::max(m, ops_->max_abs_weighted_node(f.comp(c), gamma));
    return m;
}

double Norms::hk(const Field& f, int k) {
    if (k < 0 || k > 3) throw std::domain_error("H^k supported only for k <= 3");
    const Grid& g = f.grid();
    double s = l2sq(f);
    if (k == 0) return std::sqrt(s);
    // enumerate multi-indices (g1,g2,g3) with 1 <= |gamma| <= k
    for (int g1 = 0; g1 <= k; ++g1)
        for (int g2 = 0; g2 + g1 <= k; ++g2)
            for (int g3 = 0; g3 + g2 + g1 <= k; ++g3) {
                int tot = g1 + g2 + g3;
                if (tot < 1) continue;
                Field d(g, f.ncomp(), f.time());
                for (int c = 0; c < f.ncomp(); ++c) {
                    std::vector<double> cur(f.comp(c), f.comp(c) + g.nodes());
                    std::vector<double> tmp(g.nodes());
                    for (int r = 0; r < g1; ++r) { ops_->deriv_node(cur.data(), 1, tmp.data()); cur.swap(tmp); }
                    for (int r = 0; r < g2; ++r) { ops_->deriv_node(cur.data(), 2, tmp.data()); cur.swap(tmp); }
                    for (int r = 0; r < g3; ++r) { ops_->deriv_node(cur.data(), 3, tmp.data()); cur.swap(tmp); }
                    std::copy(cur.begin(), cur.end(), d.comp(c));
                }
                s += l2sq(d);
            }
    return std::sqrt(s);
}

double Norms::hk_inner(const Field& a, const Field& b, int k) {
    if (a.ncomp() != b.ncomp()) throw std::invalid_argument("component mismatch");
    if (k < 0 || k > 3) throw std::domain_error("H^k supported only for k <= 3");
    const Grid& g = a.grid();
    auto deriv_all = [&](const Field& f, int g1, int g2, int g3, Field& d) {
        for (int c = 0; c < f.ncomp(); ++c) {
            std::vector<double> cur(f.comp(c), f.comp(c) + g.nodes());
            std::vector<double> tmp(g.nodes());
            for (int r = 0; r < g1; ++r) { ops_->deriv_node(cur.data(), 1, tmp.data()); cur.swap(tmp); }
            for (int r = 0; r < g2; ++r) { ops_->deriv_node(cur.data(), 2, tmp.data()); cur.swap(tmp); }
            for (int r = 0; r < g3; ++r) { ops_->deriv_node(cur.data(), 3, tmp.data()); cur.swap(tmp); }
            std::copy(cur.begin(), cur.end(), d.comp(c));
        }
    };
    double s = inner(a, b);
    for (int g1 = 0; g1 <= k; ++g1)
        for (int g2 = 0; g2 + g1 <= k; ++g2)
            for (int g3 = 0; g3 + g2 + g1 <= k; ++g3) {
                if (g1 + g2 + g3 < 1) continue;
                Field da(g, a.ncomp()), db(g, b.ncomp());
                deriv_all(a, g1, g2, g3, da);
                deriv_all(b, g1, g2, g3, db);
                s += inner(da, db);
            }
    return s;
}

double Norms::slice_l2sq(const Field& f, int j) const {
    const Grid& g = f.grid();
    const std::size_t pl = g.plane();
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c)
        s += simd::sumsq(f.comp(c) + j * pl, pl);
    return s * g.area_weight();
}

double Norms::trace_l2(const Field& f) { return std::sqrt(slice_l2sq(f, 0)); }

double Norms::trace_h1(const Field& f) {
    const Grid& g = f.grid();
    const std::size_t pl = g.plane();
    double s = slice_l2sq(f, 0);
    Fft2D fft(g.n1, g.n2, g.P);
    std::vector<double> d(pl);
    for (int c = 0; c < f.ncomp(); ++c) {
        for (int dir = 1; dir <= 2; ++dir) {
            fft.forward(f.comp(c));  // j = 0 slice is the first plane
            fft.apply_ik(dir);
            fft.inverse(d.data());
            s += simd::sumsq(d.data(), pl) * g.area_weight();
        }
    }
    return std::sqrt(s);
}

double Norms::inner(const Field& a, const Field& b) {
    if (a.ncomp() != b.ncomp()) throw std::invalid_argument("component mismatch");
    double s = 0.0;
    for (int c = 0; c < a.ncomp(); ++c) s += ops_->inner_node(a.comp(c), b.comp(c));
    return s;
}

} // namespace invlab
