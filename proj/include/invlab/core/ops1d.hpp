#pragma once
#include "invlab/core/grid.hpp"

// 1-D vertical operator stencils shared by the per-mode preconditioner
// assembly in the projection and diffusion solves. q: cells (n3), t: nodes
// (n3+1); all adjoints are with respect to the wc / wn quadrature weights.

namespace invlab::ops1d {

inline void avgT(const Grid& g, const double* q, double* t) {
    for (int k = 0; k <= g.n3; ++k) {
        double v = 0.0;
        if (k > 0) v += 0.5 * g.wc[k - 1] * q[k - 1];
        if (k < g.n3) v += 0.5 * g.wc[k] * q[k];
        t[k] = v / g.wn[k];
    }
}

inline void g3T(const Grid& g, const double* q, double* t) {
    for (int k = 0; k <= g.n3; ++k) {
        double v = 0.0;
        if (k > 0) v += q[k - 1];
        if (k < g.n3) v -= q[k];
        t[k] = v / g.wn[k];
    }
}

inline void avg(const Grid& g, const double* t, double* q) {
    for (int j = 0; j < g.n3; ++j) q[j] = 0.5 * (t[j] + t[j + 1]);
}

inline void g3(const Grid& g, const double* t, double* q) {
    for (int j = 0; j < g.n3; ++j) q[j] = (t[j + 1] - t[j]) / g.wc[j];
}

} // namespace invlab::ops1d
