#include "truncpol/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "truncpol/lp.hpp"
#include "truncpol/solvers.hpp"

namespace truncpol {
namespace {

void require_dim(Eigen::Index expected, Eigen::Index got, char const* where) {
    if (expected != got) {
        throw ArgumentError(std::string(where) + ": dimension mismatch (expected " +
                            std::to_string(expected) + ", got " + std::to_string(got) + ")");
    }
}

bool interiors_overlap(Interval const& a, Interval const& b) {
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
        if (std::max(a.lower()[i], b.lower()[i]) >= std::min(a.upper()[i], b.upper()[i])) {
            return false;
        }
    }
    return true;
}

}  // namespace

Interval::Interval(Vec lower, Vec upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() < 1 || lower_.size() != upper_.size()) {
        throw ArgumentError("Interval: bounds must be nonempty and of equal length");
    }
    for (Eigen::Index i = 0; i < lower_.size(); ++i) {
        if (std::isnan(lower_[i]) || std::isnan(upper_[i]) || lower_[i] > upper_[i]) {
            throw ArgumentError("Interval: lower bound exceeds upper bound");
        }
    }
}

double Interval::log_volume() const {
    return (upper_ - lower_).array().log().sum();
}

HPolytope::HPolytope(Mat normals, Vec offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
    if (normals_.rows() < 1 || normals_.cols() < 1 || normals_.rows() != offsets_.size()) {
        throw ArgumentError("HPolytope: need m >= 1 rows with matching offsets");
    }
    for (Eigen::Index j = 0; j < normals_.rows(); ++j) {
        if (normals_.row(j).cwiseAbs().maxCoeff() == 0.0) {
            throw ArgumentError("HPolytope: all-zero normal row " + std::to_string(j));
        }
    }
    if (!normals_.allFinite() || offsets_.hasNaN()) {
        throw ArgumentError("HPolytope: non-finite data");
    }
}

HPolytope HPolytope::from_interval(Interval const& box) {
    Eigen::Index const d = box.dim();
    Mat a(2 * d, d);
    a << Mat::Identity(d, d), -Mat::Identity(d, d);
    Vec b(2 * d);
    b << box.upper(), -box.lower();
    return HPolytope(std::move(a), std::move(b));
}

Zonotope::Zonotope(Vec center, Mat generators)
    : center_(std::move(center)), generators_(std::move(generators)) {
    if (center_.size() < 1) throw ArgumentError("Zonotope: empty center");
    if (generators_.cols() == 0) generators_.resize(center_.size(), 0);
    if (generators_.rows() != center_.size()) {
        throw ArgumentError("Zonotope: generator rows must match center length");
    }
}

IntervalUnion::IntervalUnion(std::vector<Interval> members) : members_(std::move(members)) {
    if (members_.empty()) throw ArgumentError("IntervalUnion: need at least one member");
    for (auto const& m : members_) {
        require_dim(members_.front().dim(), m.dim(), "IntervalUnion");
    }
    for (std::size_t i = 0; i < members_.size(); ++i) {
        for (std::size_t j = i + 1; j < members_.size(); ++j) {
            if (interiors_overlap(members_[i], members_[j])) {
                throw ArgumentError("IntervalUnion: members " + std::to_string(i) + " and " +
                                    std::to_string(j) + " overlap");
            }
        }
    }
}

Eigen::Index dim(ConstraintSet const& set) {
    return std::visit([](auto const& s) { return s.dim(); }, set);
}

bool contains(Interval const& box, Vec const& x, double slack) {
    require_dim(box.dim(), x.size(), "contains");
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x[i] >= box.lower()[i] - slack && x[i] <= box.upper()[i] + slack)) return false;
    }
    return true;
}

bool contains(HPolytope const& poly, Vec const& x, double slack) {
    require_dim(poly.dim(), x.size(), "contains");
    for (Eigen::Index j = 0; j < poly.rows(); ++j) {
        if (!(poly.normals().row(j).dot(x) <= poly.offsets()[j] + slack)) return false;
    }
    return true;
}

bool contains(Zonotope const& zono, Vec const& x, double slack) {
    require_dim(zono.dim(), x.size(), "contains");
    Eigen::Index const d = zono.dim();
    Eigen::Index const g = zono.order();
    Vec const shifted = x - zono.center();
    if (g == 0) return shifted.cwiseAbs().maxCoeff() <= slack;
    // beta = 2y - 1 with y in [0, 1]^g and |G beta - (x - c)| <= slack.
    Mat const& G = zono.generators();
    Vec const target = shifted + G * Vec::Ones(g);
    lp::Problem p;
    p.cost = Vec::Zero(g);
    p.A_ub.resize(2 * d + g, g);
    p.b_ub.resize(2 * d + g);
    p.A_ub << 2.0 * G, -2.0 * G, Mat::Identity(g, g);
    p.b_ub << target.array() + slack, -target.array() + slack, Vec::Ones(g);
    return lp::solve(p).status == lp::Status::Optimal;
}

bool contains(IntervalUnion const& uni, Vec const& x, double slack) {
    for (auto const& m : uni.members()) {
        if (contains(m, x, slack)) return true;
    }
    return false;
}

bool contains(ConstraintSet const& set, Vec const& x, double slack) {
    return std::visit([&](auto const& s) { return contains(s, x, slack); }, set);
}

double support(Interval const& box, Vec const& direction) {
    require_dim(box.dim(), direction.size(), "support");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < direction.size(); ++i) {
        double const l = direction[i];
        if (l > 0.0) {
            acc += l * box.upper()[i];
        } else if (l < 0.0) {
            acc += l * box.lower()[i];
        }
    }
    return acc;
}

double support(HPolytope const& poly, Vec const& direction) {
    require_dim(poly.dim(), direction.size(), "support");
    if (direction.cwiseAbs().maxCoeff() == 0.0) throw ArgumentError("support: zero direction");
    lp::Problem p;
    p.cost = -direction;
    p.A_ub = poly.normals();
    p.b_ub = poly.offsets();
    p.free.assign(poly.dim(), true);
    lp::Solution const s = lp::solve(p);
    switch (s.status) {
        case lp::Status::Optimal:
            return direction.dot(s.x);
        case lp::Status::Unbounded:
            throw UnboundedSetError("support: polytope unbounded in direction");
        case lp::Status::Infeasible:
            throw EmptySetError("support: polytope is empty");
        default:
            throw NumericError("support: simplex iteration limit", 0.0);
    }
}

double support(Zonotope const& zono, Vec const& direction) {
    require_dim(zono.dim(), direction.size(), "support");
    return direction.dot(zono.center()) +
           (direction.transpose() * zono.generators()).cwiseAbs().sum();
}

double support(ConstraintSet const& set, Vec const& direction) {
    struct Visitor {
        Vec const& l;
        double operator()(Interval const& s) const { return support(s, l); }
        double operator()(HPolytope const& s) const { return support(s, l); }
        double operator()(Zonotope const& s) const { return support(s, l); }
        double operator()(IntervalUnion const& s) const {
            double best = -std::numeric_limits<double>::infinity();
            for (auto const& m : s.members()) best = std::max(best, support(m, l));
            return best;
        }
    };
    return std::visit(Visitor{direction}, set);
}

Interval outer_interval(HPolytope const& poly) {
    Eigen::Index const d = poly.dim();
    Vec lo(d), hi(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e[i] = 1.0;
        hi[i] = support(poly, e);
        lo[i] = -support(poly, -e);
    }
    return Interval(lo, hi);
}

bool box_inside(Interval const& box, HPolytope const& poly, double slack) {
    require_dim(poly.dim(), box.dim(), "box_inside");
    Vec const c = box.center();
    Vec const r = box.half_widths();
    for (Eigen::Index j = 0; j < poly.rows(); ++j) {
        auto const a = poly.normals().row(j);
        if (a.dot(c) + a.cwiseAbs().dot(r) > poly.offsets()[j] + slack) return false;
    }
    return true;
}

Interval inner_interval(HPolytope const& poly) {
    // When the bounding box already fits, it is optimal.
    Interval const outer = outer_interval(poly);
    if ((outer.upper().array() <= outer.lower().array()).any())
        throw DegenerateSetError("inner_interval: polytope has empty interior");
    if (box_inside(outer, poly)) return outer;

    InscribedBoxResult const res = solve_inscribed_box(poly);
    Vec r = res.half_widths;
    Mat const abs_a = poly.normals().cwiseAbs();
    // The solver may sit a few ulps outside tight rows; pull the faces in so
    // the box is contained without slack.
    for (int attempt = 0; attempt < 16; ++attempt) {
        if (box_inside(Interval(res.center - r, res.center + r), poly)) break;
        Vec const excess = poly.normals() * res.center + abs_a * r - poly.offsets();
        double shrink = 0.0;
        for (Eigen::Index j = 0; j < excess.size(); ++j)
            if (excess[j] > 0) shrink = std::max(shrink, 2.0 * excess[j] / abs_a.row(j).dot(r));
        r *= 1.0 - std::max(shrink, 8.0 * std::numeric_limits<double>::epsilon());
    }
    Interval box(res.center - r, res.center + r);
    if (!box_inside(box, poly)) {
        throw NumericError("inner_interval: solution not contained in polytope", res.kkt_residual);
    }
    return box;
}

namespace {

ChebyshevBall solve_chebyshev(HPolytope const& poly, double radius_cap) {
    Eigen::Index const d = poly.dim();
    Eigen::Index const m = poly.rows();
    bool const capped = std::isfinite(radius_cap);
    lp::Problem p;
    p.cost = Vec::Zero(d + 1);
    p.cost[d] = -1.0;
    p.A_ub = Mat::Zero(m + (capped ? 1 : 0), d + 1);
    p.b_ub = Vec::Zero(p.A_ub.rows());
    p.A_ub.topLeftCorner(m, d) = poly.normals();
    p.A_ub.col(d).head(m) = poly.normals().rowwise().norm();
    p.b_ub.head(m) = poly.offsets();
    if (capped) {
        p.A_ub(m, d) = 1.0;
        p.b_ub[m] = radius_cap;
    }
    p.free.assign(d + 1, true);
    p.free[d] = false;
    lp::Solution const s = lp::solve(p);
    switch (s.status) {
        case lp::Status::Optimal:
            return {s.x.head(d), s.x[d]};
        case lp::Status::Unbounded:
            throw UnboundedSetError("chebyshev_center: polytope contains arbitrarily large balls");
        case lp::Status::Infeasible:
            throw EmptySetError("chebyshev_center: polytope is empty");
        default:
            throw NumericError("chebyshev_center: simplex iteration limit", 0.0);
    }
}

}  // namespace

ChebyshevBall chebyshev_center(HPolytope const& poly) {
    ChebyshevBall ball = solve_chebyshev(poly, std::numeric_limits<double>::infinity());
    double const scale = 1.0 + poly.offsets().cwiseAbs().maxCoeff();
    if (ball.radius <= 1e-12 * scale) {
        throw DegenerateSetError("chebyshev_center: polytope has empty interior");
    }
    return ball;
}

ChebyshevBall capped_interior_point(HPolytope const& poly, double radius_cap) {
    return solve_chebyshev(poly, radius_cap);
}

namespace detail {

std::pair<double, double> chord_from(HPolytope const& poly, Vec const& point,
                                     Vec const& direction) {
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < poly.rows(); ++j) {
        auto const a = poly.normals().row(j);
        double const rate = a.dot(direction);
        double const room = std::max(poly.offsets()[j] - a.dot(point), 0.0);
        if (rate > 0.0) {
            tmax = std::min(tmax, room / rate);
        } else if (rate < 0.0) {
            tmin = std::max(tmin, room / rate);
        }
    }
    if (!std::isfinite(tmin) || !std::isfinite(tmax)) {
        throw UnboundedSetError("chord: line leaves every halfspace bound");
    }
    return {tmin, tmax};
}

}  // namespace detail

std::pair<double, double> chord(HPolytope const& poly, Vec const& point, Vec const& direction) {
    require_dim(poly.dim(), point.size(), "chord");
    require_dim(poly.dim(), direction.size(), "chord");
    if (direction.cwiseAbs().maxCoeff() == 0.0) throw ArgumentError("chord: zero direction");
    for (Eigen::Index j = 0; j < poly.rows(); ++j) {
        if (!(poly.normals().row(j).dot(point) < poly.offsets()[j])) {
            throw PreconditionError("chord: point not strictly inside polytope");
        }
    }
    return detail::chord_from(poly, point, direction);
}

namespace {

void check_scale(Vec const& shift, Vec const& scale, Eigen::Index d) {
    require_dim(d, shift.size(), "affine_preimage");
    require_dim(d, scale.size(), "affine_preimage");
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!(scale[i] > 0.0)) throw ArgumentError("affine_preimage: scale must be positive");
    }
}

}  // namespace

HPolytope affine_preimage(HPolytope const& poly, Vec const& shift, Vec const& scale) {
    check_scale(shift, scale, poly.dim());
    Mat a = poly.normals() * scale.asDiagonal();
    Vec b = poly.offsets() - poly.normals() * shift;
    return HPolytope(std::move(a), std::move(b));
}

Interval affine_preimage(Interval const& box, Vec const& shift, Vec const& scale) {
    check_scale(shift, scale, box.dim());
    return Interval(((box.lower() - shift).array() / scale.array()).matrix(),
                    ((box.upper() - shift).array() / scale.array()).matrix());
}

ConstraintSet affine_preimage(ConstraintSet const& set, Vec const& shift, Vec const& scale) {
    struct Visitor {
        Vec const& shift;
        Vec const& scale;
        ConstraintSet operator()(Interval const& s) const { return affine_preimage(s, shift, scale); }
        ConstraintSet operator()(HPolytope const& s) const { return affine_preimage(s, shift, scale); }
        ConstraintSet operator()(Zonotope const& s) const {
            check_scale(shift, scale, s.dim());
            Vec const inv = scale.cwiseInverse();
            return Zonotope(((s.center() - shift).array() * inv.array()).matrix(),
                            inv.asDiagonal() * s.generators());
        }
        ConstraintSet operator()(IntervalUnion const& s) const {
            std::vector<Interval> members;
            members.reserve(s.size());
            for (auto const& m : s.members()) members.push_back(affine_preimage(m, shift, scale));
            return IntervalUnion(std::move(members));
        }
    };
    return std::visit(Visitor{shift, scale}, set);
}

HPolytope zonotope_to_hpolytope_2d(Zonotope const& zono) {
    if (zono.dim() != 2) throw ArgumentError("zonotope_to_hpolytope_2d: zonotope must be planar");
    Mat const& G = zono.generators();
    std::vector<Vec> normals;
    for (Eigen::Index k = 0; k < G.cols(); ++k) {
        double const len = G.col(k).norm();
        if (len == 0.0) continue;
        Vec n(2);
        n << -G(1, k) / len, G(0, k) / len;
        normals.push_back(n);
    }
    if (normals.empty()) {
        normals.push_back(Vec::Unit(2, 0));
        normals.push_back(Vec::Unit(2, 1));
    }
    Mat a(2 * normals.size(), 2);
    Vec b(2 * normals.size());
    for (std::size_t k = 0; k < normals.size(); ++k) {
        Vec const& n = normals[k];
        double const spread = (n.transpose() * G).cwiseAbs().sum();
        double const mid = n.dot(zono.center());
        a.row(2 * k) = n.transpose();
        b[2 * k] = mid + spread;
        a.row(2 * k + 1) = -n.transpose();
        b[2 * k + 1] = -mid + spread;
    }
    return HPolytope(std::move(a), std::move(b));
}

}  // namespace truncpol
