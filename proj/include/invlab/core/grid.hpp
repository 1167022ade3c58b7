#pragma once
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace invlab {

/// Vertical coordinate map y3 = S(sigma), sigma uniform in [0,1].
/// c == 0 gives a uniform grid; c > 0 clusters nodes at the wall with a
/// smooth sinh stretching (equivalent to geometric grading with per-step
/// ratio ~ exp(c/n3)).
struct GridMap {
    double H = 1.0;
    double c = 0.0;

    double y(double s) const {
        return c == 0.0 ? H * s : H * std::sinh(c * s) / std::sinh(c);
    }
    double dy(double s) const {  // dS/dsigma
        return c == 0.0 ? H : H * c * std::cosh(c * s) / std::sinh(c);
    }

    /// Choose c so that the first node spacing is <= dy_wall.
    static GridMap for_wall_spacing(double H, int n3, double dy_wall);
};

/// Tensor grid: periodic [0,P)^2 in x', mapped nodes in y3 over [0,H].
/// Nodes carry velocities/scalars (j = 0..n3, walls included); cells
/// (j+1/2 levels, n3 of them) carry pressure-like quantities.
class Grid {
  public:
    Grid(int n1, int n2, int n3, double period, GridMap map);

    int n1, n2, n3;
    double P;
    GridMap map;

    // node data
    std::vector<double> y;    // node y3, size n3+1
    std::vector<double> wn;   // node quadrature weights (mapped trapezoid), size n3+1
    std::vector<double> dsn;  // S'(sigma_j), size n3+1
    // cell data
    std::vector<double> yc;   // cell-center y3 (mapped midpoints), size n3
    std::vector<double> wc;   // cell widths y[j+1]-y[j], size n3
    double hs;                // sigma spacing 1/n3

    double h1() const { return P / n1; }
    double h2() const { return P / n2; }
    double H() const { return map.H; }
    double area_weight() const { return h1() * h2(); }

    std::size_t plane() const { return std::size_t(n1) * n2; }
    std::size_t nodes() const { return plane() * (n3 + 1); }
    std::size_t cells() const { return plane() * n3; }

    double x1(int i1) const { return h1() * i1; }
    double x2(int i2) const { return h2() * i2; }

    double max_grading_ratio() const;

    bool same_shape(const Grid& o) const {
        return n1 == o.n1 && n2 == o.n2 && n3 == o.n3 && P == o.P &&
               map.H == o.map.H && map.c == o.map.c;
    }
};

/// Scalar or vector samples on grid nodes.
class Field {
  public:
    Field() = default;
    Field(const Grid& g, int ncomp, double time = 0.0)
        : grid_(&g), ncomp_(ncomp), time_(time), a_(g.nodes() * ncomp, 0.0) {}

    const Grid& grid() const { return *grid_; }
    int ncomp() const { return ncomp_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }
    std::size_t size() const { return a_.size(); }

    double* comp(int c) { return a_.data() + std::size_t(c) * grid_->nodes(); }
    const double* comp(int c) const { return a_.data() + std::size_t(c) * grid_->nodes(); }

    double& at(int c, int j, int i2, int i1) {
        return a_[idx(c, j, i2, i1)];
    }
    double at(int c, int j, int i2, int i1) const {
        return a_[idx(c, j, i2, i1)];
    }

    std::size_t idx(int c, int j, int i2, int i1) const {
        return ((std::size_t(c) * (grid_->n3 + 1) + j) * grid_->n2 + i2) * grid_->n1 + i1;
    }

    void fill(double v) { for (auto& x : a_) x = v; }
    void zero_walls();

    bool finite() const;

  private:
    const Grid* grid_ = nullptr;
    int ncomp_ = 0;
    double time_ = 0.0;
    std::vector<double> a_;
};

/// Samples on cell levels (pressure space).
class CellField {
  public:
    CellField() = default;
    CellField(const Grid& g, int ncomp = 1)
        : grid_(&g), ncomp_(ncomp), a_(g.cells() * ncomp, 0.0) {}

    const Grid& grid() const { return *grid_; }
    int ncomp() const { return ncomp_; }
    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }
    std::size_t size() const { return a_.size(); }
    double* comp(int c) { return a_.data() + std::size_t(c) * grid_->cells(); }
    const double* comp(int c) const { return a_.data() + std::size_t(c) * grid_->cells(); }

    double& at(int c, int j, int i2, int i1) {
        return a_[((std::size_t(c) * grid_->n3 + j) * grid_->n2 + i2) * grid_->n1 + i1];
    }
    double at(int c, int j, int i2, int i1) const {
        return a_[((std::size_t(c) * grid_->n3 + j) * grid_->n2 + i2) * grid_->n1 + i1];
    }
    void fill(double v) { for (auto& x : a_) x = v; }

  private:
    const Grid* grid_ = nullptr;
    int ncomp_ = 0;
    std::vector<double> a_;
};

} // namespace invlab
