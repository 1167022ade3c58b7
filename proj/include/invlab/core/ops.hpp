#pragma once
#include "invlab/core/fft2d.hpp"
#include "invlab/core/grid.hpp"

namespace invlab {

/// Discrete differential operators on one grid: spectral derivatives in the
/// periodic directions, mapped finite differences in y3, and the
/// node<->cell gradient/adjoint pair used by the dissipation form and the
/// divergence constraint. Owns FFT workspace; not shared across threads.
class Ops {
  public:
    explicit Ops(const Grid& g);

    const Grid& grid() const { return *g_; }

    // ---- node-based derivatives (differentiate() of the field module) ----
    // dir 1,2: spectral; dir 3: centered in mapped space, 2nd-order one-sided
    // closures at the walls.
    void deriv_node(const double* in, int dir, double* out);
    // both horizontal derivatives from a single forward transform
    void deriv12_node(const double* in, double* out1, double* out2);

    // ---- node->cell gradient components (2nd order at cell centers) ----
    void gc(const double* node, int dir, double* cell);
    // adjoints wrt the quadrature inner products: <gc(u),q>_c = <u, gcT(q)>_n
    void gcT(const double* cell, int dir, double* node);
    void gc12(const double* node, double* cell1, double* cell2);

    /// node = gcT(cell1, dir 1) + gcT(cell2, dir 2), fused transforms
    void gcT12_add(const double* cell1, const double* cell2, double* node);
    /// out = D1 f + D2 g at nodes, fused transforms
    void div12_add(const double* f, const double* g, double* out);

    // node->cell average and its adjoint
    void avg(const double* node, double* cell) const;
    void avgT(const double* cell, double* node) const;

    // ---- quadrature ----
    double integral_node(const double* node) const;           // integral over box
    double l2sq_node(const double* node) const;                // int f^2
    double l2sq_node_weighted(const double* node, double gamma) const;  // int y3^gamma f^2
    double inner_node(const double* a, const double* b) const; // int a b
    double l2sq_cell(const double* cell) const;
    double inner_cell(const double* a, const double* b) const;
    double max_abs_node(const double* node) const;
    double max_abs_weighted_node(const double* node, double gamma) const;

  private:
    const Grid* g_;
    Fft2D fft_;
    std::vector<double> scratch_;          // one node scalar
    std::vector<double> scratch2_;
    std::vector<std::complex<double>> spec_save_;
};

} // namespace invlab
