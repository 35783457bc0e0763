#pragma once

#include <cmath>
#include <vector>

#include "truncpol/geometry.hpp"
#include "truncpol/rng.hpp"

namespace fixtures {

using truncpol::HPolytope;
using truncpol::Interval;
using truncpol::Mat;
using truncpol::Vec;

inline Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

inline Interval box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
    return Interval(vec(lo), vec(hi));
}

// {x >= 0, x1 + x2 <= 1}
inline HPolytope simplex2() {
    Mat A(3, 2);
    A << -1, 0, 0, -1, 1, 1;
    return HPolytope(A, vec({0, 0, 1}));
}

// [-1, 1]^2 turned by 45 degrees.
inline HPolytope rotated_square() {
    double const s = 1.0 / std::sqrt(2.0);
    Mat A(4, 2);
    A << s, s, -s, -s, s, -s, -s, s;
    return HPolytope(A, Vec::Constant(4, 1.0));
}

// Random polytope around the origin: a box cut by a few halfspaces that
// keep a ball of radius 0.2 around `x0`.
inline HPolytope random_polytope(int d, truncpol::Rng& rng) {
    int const cuts = static_cast<int>(rng.integer(1, 2 * d));
    Mat A(2 * d + cuts, d);
    Vec b(2 * d + cuts);
    A.topRows(d) = Mat::Identity(d, d);
    A.middleRows(d, d) = -Mat::Identity(d, d);
    b.head(2 * d).setOnes();
    Vec x0(d);
    for (int i = 0; i < d; ++i) x0[i] = rng.uniform(-0.3, 0.3);
    for (int k = 0; k < cuts; ++k) {
        Vec n = rng.unit_direction(d);
        A.row(2 * d + k) = n.transpose();
        b[2 * d + k] = n.dot(x0) + rng.uniform(0.2, 1.0);
    }
    return HPolytope(A, b);
}

// Points drawn uniformly from the bounding box, kept when inside.
inline std::vector<Vec> points_inside(HPolytope const& poly, Interval const& bound, int n,
                                      truncpol::Rng& rng) {
    std::vector<Vec> out;
    Vec x(poly.dim());
    for (int guard = 0; static_cast<int>(out.size()) < n && guard < 1000 * n; ++guard) {
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x[i] = rng.uniform(bound.lower()[i], bound.upper()[i]);
        if (truncpol::contains(poly, x)) out.push_back(x);
    }
    return out;
}

}  // namespace fixtures
