#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "truncpol/types.hpp"

namespace truncpol {

/// Axis-aligned box [lower, upper].
class Interval {
  public:
    Interval() = default;
    Interval(Vec lower, Vec upper);

    Vec const& lower() const { return lower_; }
    Vec const& upper() const { return upper_; }
    Eigen::Index dim() const { return lower_.size(); }
    Vec center() const { return 0.5 * (lower_ + upper_); }
    Vec half_widths() const { return 0.5 * (upper_ - lower_); }
    double log_volume() const;

    bool operator==(Interval const& other) const {
        return lower_ == other.lower_ && upper_ == other.upper_;
    }

  private:
    Vec lower_;
    Vec upper_;
};

/// Halfspace-represented polytope {x : A x <= b}.
class HPolytope {
  public:
    HPolytope() = default;
    HPolytope(Mat normals, Vec offsets);

    Mat const& normals() const { return normals_; }
    Vec const& offsets() const { return offsets_; }
    Eigen::Index dim() const { return normals_.cols(); }
    Eigen::Index rows() const { return normals_.rows(); }

    static HPolytope from_interval(Interval const& box);

    bool operator==(HPolytope const& other) const {
        return normals_ == other.normals_ && offsets_ == other.offsets_;
    }

  private:
    Mat normals_;
    Vec offsets_;
};

/// Zonotope {center + G beta : |beta|_inf <= 1}.
class Zonotope {
  public:
    Zonotope() = default;
    Zonotope(Vec center, Mat generators);

    Vec const& center() const { return center_; }
    Mat const& generators() const { return generators_; }
    Eigen::Index dim() const { return center_.size(); }
    Eigen::Index order() const { return generators_.cols(); }

    bool operator==(Zonotope const& other) const {
        return center_ == other.center_ && generators_ == other.generators_;
    }

  private:
    Vec center_;
    Mat generators_;
};

/// Union of boxes with pairwise disjoint interiors.
class IntervalUnion {
  public:
    IntervalUnion() = default;
    explicit IntervalUnion(std::vector<Interval> members);

    std::vector<Interval> const& members() const { return members_; }
    Eigen::Index dim() const { return members_.front().dim(); }
    std::size_t size() const { return members_.size(); }

    bool operator==(IntervalUnion const& other) const { return members_ == other.members_; }

  private:
    std::vector<Interval> members_;
};

using ConstraintSet = std::variant<Interval, HPolytope, Zonotope, IntervalUnion>;

Eigen::Index dim(ConstraintSet const& set);

/// Membership test; `slack` relaxes every bound/halfspace by that amount.
bool contains(ConstraintSet const& set, Vec const& x, double slack = 0.0);
bool contains(Interval const& box, Vec const& x, double slack = 0.0);
bool contains(HPolytope const& poly, Vec const& x, double slack = 0.0);
bool contains(Zonotope const& zono, Vec const& x, double slack = 0.0);
bool contains(IntervalUnion const& uni, Vec const& x, double slack = 0.0);

/// sup over the set of direction^T x.
double support(ConstraintSet const& set, Vec const& direction);
double support(Interval const& box, Vec const& direction);
double support(HPolytope const& poly, Vec const& direction);
double support(Zonotope const& zono, Vec const& direction);

/// Tightest enclosing box via support functions along +-e_i.
Interval outer_interval(HPolytope const& poly);

/// Box of maximal geometric-mean width contained in `poly`.
Interval inner_interval(HPolytope const& poly);

/// True when box is a subset of poly (exact per-halfspace test).
bool box_inside(Interval const& box, HPolytope const& poly, double slack = 0.0);

struct ChebyshevBall {
    Vec center;
    double radius = 0.0;
};

/// Largest inscribed Euclidean ball. Throws EmptySetError / UnboundedSetError.
ChebyshevBall chebyshev_center(HPolytope const& poly);

/// Interior-most point with the inscribed radius capped at `radius_cap`;
/// well defined for unbounded polytopes.
ChebyshevBall capped_interior_point(HPolytope const& poly, double radius_cap);

/// Parameter range of {point + t direction} inside poly. Requires point
/// strictly interior.
std::pair<double, double> chord(HPolytope const& poly, Vec const& point,
                                Vec const& direction);

/// {x : shift + scale .* x in set}.
ConstraintSet affine_preimage(ConstraintSet const& set, Vec const& shift, Vec const& scale);
HPolytope affine_preimage(HPolytope const& poly, Vec const& shift, Vec const& scale);
Interval affine_preimage(Interval const& box, Vec const& shift, Vec const& scale);

/// Exact halfspace form of a planar zonotope.
HPolytope zonotope_to_hpolytope_2d(Zonotope const& zono);

namespace detail {
/// Chord without the strict-interior check; negative slacks count as zero.
std::pair<double, double> chord_from(HPolytope const& poly, Vec const& point,
                                     Vec const& direction);
}  // namespace detail

}  // namespace truncpol
