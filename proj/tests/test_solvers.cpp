#include <doctest.h>

#include "fixtures.hpp"
#include "truncpol/dataset.hpp"
#include "truncpol/solvers.hpp"

using namespace truncpol;
using fixtures::box;
using fixtures::vec;

namespace {

double objective(QpProblem const& p, Vec const& a) {
    return (a - p.target).cwiseAbs2().dot(p.weights);
}

}  // namespace

TEST_CASE("mode QP closed cases") {
    HPolytope const sq = HPolytope::from_interval(box({-1, -1}, {1, 1}));
    Vec const inside = solve_mode_qp({vec({1, 1}), vec({0, 0}), sq});
    CHECK(inside.norm() < 1e-12);

    Vec const proj = solve_mode_qp({vec({1, 1}), vec({2, 0}), sq});
    CHECK((proj - vec({1, 0})).norm() < 1e-12);

    // Single halfspace x1 + x2 <= 1, sigma = (1, 2): a = mu - lambda sigma^2 n
    // with lambda = 3/5, i.e. (1.4, -0.4).
    Mat A(1, 2);
    A << 1, 1;
    Vec const a = solve_mode_qp({vec({1, 0.25}), vec({2, 2}), HPolytope(A, vec({1}))});
    CHECK((a - vec({1.4, -0.4})).norm() < 1e-10);
}

TEST_CASE("mode QP equals clamping on boxes") {
    Rng rng(2);
    for (int k = 0; k < 100; ++k) {
        int const d = static_cast<int>(rng.integer(1, 6));
        Vec lo(d), hi(d), mu(d), w(d);
        for (int i = 0; i < d; ++i) {
            lo[i] = rng.uniform(-2, 0);
            hi[i] = lo[i] + rng.uniform(0.1, 2);
            mu[i] = rng.uniform(-3, 3);
            w[i] = 1.0 / std::pow(rng.uniform(0.1, 2), 2);
        }
        Interval const b(lo, hi);
        Vec const qp = solve_mode_qp({w, mu, HPolytope::from_interval(b)});
        CHECK((qp - clamp_to(b, mu)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("mode QP is feasible and locally optimal") {
    Rng rng(9);
    for (int k = 0; k < 100; ++k) {
        int const d = static_cast<int>(rng.integer(2, 5));
        DatasetInstance const inst = random_instance(d, rng);
        QpProblem const p{inst.sigma.cwiseAbs2().cwiseInverse(), inst.mu, inst.polytope};
        Vec const a = solve_mode_qp(p);
        CHECK((inst.polytope.normals() * a - inst.polytope.offsets()).maxCoeff() <= 1e-9);
        double const f = objective(p, a);
        for (int t = 0; t < 100; ++t) {
            Vec const step = 1e-4 * rng.unit_direction(d);
            if (!contains(inst.polytope, a + step)) continue;
            CHECK(objective(p, a + step) >= f - 1e-8);
        }
    }
}

TEST_CASE("inscribed box reaches its KKT tolerance") {
    Rng rng(12);
    for (int d = 2; d <= 6; ++d) {
        for (int k = 0; k < 20; ++k) {
            DatasetInstance const inst = random_instance(d, rng);
            InscribedBoxResult const r = solve_inscribed_box(inst.polytope);
            CHECK(r.kkt_residual <= 1e-8);
            CHECK((r.half_widths.array() > 0).all());
        }
    }
}

TEST_CASE("inscribed box with a barely active extra facet") {
    // A box row and an obstacle row that is tight only by ~1e-4.
    Mat A(5, 2);
    A << 1, 0, 0, 1, -1, 0, 0, -1, -0.33921315301343202, 0.94070953903034593;
    Vec const b = vec({1, 1, 1, 1, 1.2796679405971572});
    InscribedBoxResult const r = solve_inscribed_box(HPolytope(A, b));
    CHECK(r.kkt_residual <= 1e-8);
    // Reference optimum from an independent SQP solve.
    CHECK(r.center[0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(r.center[1] == doctest::Approx(-1.35403882e-04).epsilon(1e-6));
    CHECK(r.half_widths[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.half_widths[1] == doctest::Approx(0.999864596).epsilon(1e-8));
}
