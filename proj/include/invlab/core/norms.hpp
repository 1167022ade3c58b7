#pragma once
#include <string>

#include "invlab/core/ops.hpp"

namespace invlab {

enum class NormKind {
    L2,
    Linf,
    H1,
    H2,
    H3,
    WeightedL2_y2,   // L2 with weight y3^2
    TraceL2,         // L2 of the y3=0 slice
    TraceH1,         // H1 (spectral) of the y3=0 slice
};

NormKind norm_kind_from_string(const std::string& s);

/// Norm evaluation for node fields. Multi-component fields sum component
/// norms in quadrature (L2-type) or take the max (sup-type).
class Norms {
  public:
    explicit Norms(Ops& ops) : ops_(&ops) {}

    double norm(const Field& f, NormKind kind);

    double l2(const Field& f);
    double l2sq(const Field& f);
    double linf(const Field& f);
    double weighted_l2(const Field& f, double gamma);
    double weighted_linf(const Field& f, double gamma);  // sup y3^gamma |f|
    double hk(const Field& f, int k);                    // H^k, k <= 3
    /// H^k inner product (sum over multi-indices |gamma| <= k)
    double hk_inner(const Field& a, const Field& b, int k);
    double trace_l2(const Field& f);
    double trace_h1(const Field& f);

    /// L2 inner product of two fields
    double inner(const Field& a, const Field& b);

  private:
    Ops* ops_;
    double slice_l2sq(const Field& f, int j) const;
};

} // namespace invlab
