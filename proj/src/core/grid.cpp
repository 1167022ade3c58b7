#include "invlab/core/grid.hpp"

#include <cmath>

namespace invlab {

GridMap GridMap::for_wall_spacing(double H, int n3, double dy_wall) {
    GridMap m{H, 0.0};
    double uniform = H / n3;
    if (dy_wall >= uniform) return m;
    // solve sinh(c)/c = H / (n3 * dy_wall) for c (first spacing ~ H*c*hs/sinh(c))
    double target = H / (n3 * dy_wall);
    double lo = 1e-8, hi = 60.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = std::sinh(mid) / mid;
        (v < target ? lo : hi) = mid;
    }
    m.c = 0.5 * (lo + hi);
    return m;
}

Grid::Grid(int n1_, int n2_, int n3_, double period, GridMap m)
    : n1(n1_), n2(n2_), n3(n3_), P(period), map(m) {
    if (n1 < 4 || n2 < 4 || n3 < 4) throw std::invalid_argument("grid too small");
    if ((n1 & (n1 - 1)) || (n2 & (n2 - 1)))
        throw std::invalid_argument("n1, n2 must be powers of two");
    hs = 1.0 / n3;
    y.resize(n3 + 1);
    wn.resize(n3 + 1);
    dsn.resize(n3 + 1);
    yc.resize(n3);
    wc.resize(n3);
    for (int j = 0; j <= n3; ++j) {
        double s = j * hs;
        y[j] = map.y(s);
        dsn[j] = map.dy(s);
        wn[j] = dsn[j] * hs * ((j == 0 || j == n3) ? 0.5 : 1.0);
    }
    y[0] = 0.0;
    y[n3] = map.H;
    for (int j = 0; j < n3; ++j) {
        yc[j] = map.y((j + 0.5) * hs);
        wc[j] = y[j + 1] - y[j];
    }
}

double Grid::max_grading_ratio() const {
    double r = 1.0;
    for (int j = 1; j < n3; ++j) {
        double a = wc[j] / wc[j - 1];
        r = std::max(r, std::max(a, 1.0 / a));
    }
    return r;
}

void Field::zero_walls() {
    const Grid& g = *grid_;
    for (int c = 0; c < ncomp_; ++c)
        for (int i = 0; i < int(g.plane()); ++i) {
            a_[idx(c, 0, 0, 0) + i] = 0.0;
            a_[idx(c, g.n3, 0, 0) + i] = 0.0;
        }
}

bool Field::finite() const {
    for (double v : a_)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace invlab
