#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "truncpol/oracle.hpp"
#include "truncpol/samplers.hpp"

using namespace truncpol;
using fixtures::box;
using fixtures::vec;

namespace {

void check_identity(DiagGaussian const& g, SampleDraw const& s) {
    for (Eigen::Index i = 0; i < g.dim(); ++i) CHECK(s.value[i] == g.mean[i] + g.stddev[i] * s.noise[i]);
}

}  // namespace

TEST_CASE("rejection needs about 1/Z proposals") {
    DiagGaussian const g(vec({0.0, 0.0}), vec({1.0, 1.0}));
    Interval const b = box({0.5, -0.2}, {2.0, 1.0});
    double const z = std::exp(FactorizedTrunc(g, b).log_z());
    Rng rng(1);
    double total = 0.0;
    int constexpr n = 20000;
    for (int k = 0; k < n; ++k) {
        RejectionResult const r = rejection_sample(g, b, 1000000, rng);
        REQUIRE(!r.exhausted());
        CHECK(contains(b, r.draw->value));
        check_identity(g, *r.draw);
        total += static_cast<double>(r.attempts);
    }
    // Attempts are geometric with mean 1/Z and sd sqrt(1-Z)/Z.
    double const se = std::sqrt(1 - z) / z / std::sqrt(double(n));
    CHECK(std::abs(total / n - 1.0 / z) < 5 * se);
}

TEST_CASE("rejection exhaustion is reported") {
    DiagGaussian const g(vec({0.0}), vec({1.0}));
    Rng rng(2);
    RejectionResult const r = rejection_sample(g, box({8}, {9}), 50, rng);
    CHECK(r.exhausted());
    CHECK(r.attempts == 50);
    CHECK_THROWS_AS(rejection_sample(g, box({8}, {9}), 0, rng), ArgumentError);
}

TEST_CASE("hit-and-run stays inside and matches exact box moments") {
    DiagGaussian const g(vec({0.5, -0.3}), vec({0.6, 1.2}));
    Interval const b = box({-1, -1}, {1, 0.5});
    FactorizedTrunc const exact(g, b);
    Vec const m = exact.mean();
    RdhrWalker walker(g, HPolytope::from_interval(b));
    Rng rng(3);
    walker.walk(200, rng);
    std::vector<Vec> xs;
    for (int k = 0; k < 40000; ++k) {
        walker.walk(5, rng);
        CHECK(contains(b, walker.state(), kContainmentSlack));
        xs.push_back(walker.state());
    }
    Moments const mo = moments_of(xs);
    // Correlated chain: a loose band on the mean.
    CHECK((mo.mean - m).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("fresh-chain draws match rejection draws in distribution") {
    DiagGaussian const g(vec({0.3, 0.3}), vec({0.5, 0.5}));
    HPolytope const s = fixtures::simplex2();
    Rng rng(4);
    std::vector<Vec> walk, rej;
    for (int k = 0; k < 20000; ++k) {
        SampleDraw const d = rdhr_sample(g, s, {}, rng);
        CHECK(d.method == SamplerKind::Rdhr);
        CHECK(d.walk_steps == 50 + 20);
        CHECK(contains(s, d.value, kContainmentSlack));
        check_identity(g, d);
        walk.push_back(d.value);
        rej.push_back(rejection_sample(g, s, 1000000, rng).draw->value);
    }
    Moments const a = moments_of(walk), b = moments_of(rej);
    for (int i = 0; i < 2; ++i) {
        double const se = std::hypot(a.mean_se[i], b.mean_se[i]);
        CHECK(std::abs(a.mean[i] - b.mean[i]) < 5 * se);
    }
}

TEST_CASE("hybrid tags its draws") {
    DiagGaussian const g(vec({0.0, 0.0}), vec({1.0, 1.0}));
    Rng rng(5);
    SampleDraw const easy = hybrid_sample(g, HPolytope::from_interval(box({-3, -3}, {3, 3})), 100, {}, rng);
    CHECK(easy.method == SamplerKind::Rejection);
    CHECK(easy.walk_steps == 0);

    // Mass ~1e-15: rejection with M = 100 never succeeds.
    HPolytope const far = HPolytope::from_interval(box({6, 6}, {7, 7}));
    SampleDraw const hard = hybrid_sample(g, far, 100, {}, rng);
    CHECK(hard.method == SamplerKind::Rdhr);
    CHECK(hard.attempts == 100);
    CHECK(hard.walk_steps > 0);
    CHECK(contains(far, hard.value, kContainmentSlack));

    HybridSampler sampler(g, far, 10);
    CHECK(!sampler.chain_started());
    SampleDraw const first = sampler.draw(rng);
    CHECK(sampler.chain_started());
    CHECK(first.walk_steps == 50 + 20);
    CHECK(sampler.draw(rng).walk_steps == 20);
}

TEST_CASE("reparameterized draws satisfy the identity and stay feasible") {
    Rng rng(6);
    DiagGaussian const g(vec({0.2, 0.4}), vec({0.3, 0.8}));
    HPolytope const s = fixtures::simplex2();
    for (SamplerKind k : {SamplerKind::Rejection, SamplerKind::Rdhr, SamplerKind::Hybrid}) {
        for (int t = 0; t < 200; ++t) {
            SampleDraw const d = reparam_sample(g, s, k, rng);
            check_identity(g, d);
            CHECK(contains(s, d.value, kContainmentSlack));
        }
    }
    Interval const b = box({-1, 0}, {0.5, 0.6});
    for (int t = 0; t < 200; ++t) {
        SampleDraw const d = reparam_sample(g, b, SamplerKind::InverseTransform, rng);
        check_identity(g, d);
        CHECK(contains(b, d.value, kContainmentSlack));
    }
    CHECK_THROWS_AS(reparam_sample(g, s, SamplerKind::InverseTransform, rng), PreconditionError);
}

TEST_CASE("union sampling visits members in proportion to their weights") {
    DiagGaussian const g(vec({0.0}), vec({1.0}));
    UnionTrunc const u(g, IntervalUnion({box({-2}, {-0.5}), box({0}, {0.3}), box({1}, {3})}));
    Rng rng(7);
    int constexpr n = 100000;
    std::vector<int> hits(3, 0);
    for (int k = 0; k < n; ++k) {
        SampleDraw const d = union_sample(u, rng);
        REQUIRE(d.member >= 0);
        CHECK(contains(u.set().members()[d.member], d.value, kContainmentSlack));
        ++hits[d.member];
    }
    for (int i = 0; i < 3; ++i) {
        double const w = u.weights()[i];
        CHECK(std::abs(hits[i] / double(n) - w) < 5 * std::sqrt(w * (1 - w) / n));
    }
}

TEST_CASE("same seed gives the same draws") {
    DiagGaussian const g(vec({0.3, 0.3}), vec({0.5, 0.5}));
    HPolytope const s = fixtures::simplex2();
    Rng a(8), b(8);
    for (int k = 0; k < 50; ++k) {
        CHECK(hybrid_sample(g, s, 3, {}, a).value == hybrid_sample(g, s, 3, {}, b).value);
    }
}

TEST_CASE("fallback fires only on exhaustion") {
    DiagGaussian const g(vec({0.0}), vec({1.0}));
    Rng rng(9);
    IntervalUnion const far({box({8}, {9}), box({10}, {11})});
    FallbackDraw const f = rejection_with_fallback(g, far, 20, [] { return vec({8.5}); }, rng);
    CHECK(f.used_fallback);
    CHECK(f.draw.value[0] == doctest::Approx(8.5));
    CHECK_THROWS_AS(rejection_with_fallback(g, far, 20, [] { return vec({0.0}); }, rng), PreconditionError);
    FallbackDraw const easy =
        rejection_with_fallback(g, IntervalUnion({box({-5}, {5})}), 20, [] { return vec({0.0}); }, rng);
    CHECK(!easy.used_fallback);
}
