#pragma once

#include "truncpol/geometry.hpp"

namespace truncpol {

/// minimize (a - target)^T diag(weights) (a - target)  s.t.  a in constraints.
struct QpProblem {
    Vec weights;
    Vec target;
    HPolytope constraints;
};

/// Mode of a diagonal Gaussian truncated to a polytope: weighted projection
/// of the mean, solved with a primal active-set method.
Vec solve_mode_qp(QpProblem const& problem);

/// Weighted projection onto a box; the closed form of solve_mode_qp there.
Vec clamp_to(Interval const& box, Vec const& x);

struct InscribedBoxResult {
    Vec center;
    Vec half_widths;
    double kkt_residual = 0.0;
    int newton_iterations = 0;
};

struct BarrierOptions {
    double reduction = 10.0;
    int max_newton_per_stage = 100;
    double tolerance = 1e-8;
};

/// Log-barrier Newton solve of
///   max sum log r_i  s.t.  a_j^T c + |a_j|^T r <= b_j,
/// i.e. the box [c - r, c + r] of maximal volume inside the polytope.
InscribedBoxResult solve_inscribed_box(HPolytope const& poly, BarrierOptions const& opts = {});

}  // namespace truncpol
