#pragma once

#include <vector>

#include "truncpol/types.hpp"

namespace truncpol::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

/// minimize cost^T x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,
/// x_i >= 0 unless free[i] (an empty `free` means all nonnegative).
struct Problem {
    Vec cost;
    Mat A_ub;
    Vec b_ub;
    Mat A_eq;
    Vec b_eq;
    std::vector<bool> free;
};

struct Solution {
    Status status = Status::Infeasible;
    Vec x;
    double objective = 0.0;
    int iterations = 0;
};

/// Two-phase dense simplex with Bland's anti-cycling rule. The final
/// primal point is re-solved from the optimal basis against the original
/// data to shed accumulated pivoting error.
Solution solve(Problem const& problem);

}  // namespace truncpol::lp
