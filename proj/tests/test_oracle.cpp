#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "truncpol/oracle.hpp"
#include "truncpol/truncnorm.hpp"

using namespace truncpol;
using fixtures::box;
using fixtures::vec;

TEST_CASE("mass of the whole space is exactly one") {
    DiagGaussian const g(vec({0.0, 1.0}), vec({1.0, 2.0}));
    OracleEstimate const e = mc_Z(g, box({-1e3, -1e3}, {1e3, 1e3}), 10000, 1);
    CHECK(e.value == 1.0);
    CHECK(e.std_error == 0.0);
    CHECK(e.n_samples == 10000);
    CHECK_THROWS_AS(mc_Z(g, box({0, 0}, {1, 1}), 10, 1), ArgumentError);
}

TEST_CASE("mass of boxes agrees with the product of marginals") {
    Rng rng(2);
    for (int k = 0; k < 10; ++k) {
        Vec lo(3), hi(3);
        for (int i = 0; i < 3; ++i) {
            lo[i] = rng.uniform(-2, 1);
            hi[i] = lo[i] + rng.uniform(0.3, 2.5);
        }
        DiagGaussian const g(vec({0.1, -0.2, 0.3}), vec({0.7, 1.0, 1.4}));
        Interval const b(lo, hi);
        double const exact = std::exp(FactorizedTrunc(g, b).log_z());
        OracleEstimate const e = mc_Z(g, b, 200000, 100 + k);
        CHECK(std::abs(e.value - exact) < 4 * e.std_error);
    }
}

TEST_CASE("entropy estimate of a truncated normal") {
    TruncNormal1d const t({0.3, 0.8}, -0.5, 2.0);
    OracleEstimate const e = mc_entropy([&](Rng& r) { return vec({t.sample(r)}); },
                                        [&](Vec const& x) { return t.log_pdf(x[0]); }, 200000, 3);
    CHECK(std::abs(e.value - t.entropy()) < 4 * e.std_error);
}

TEST_CASE("moments of a standard normal") {
    Moments const m = mc_moments([](Rng& r) { return r.normal_vec(2); }, 200000, 4);
    CHECK(std::abs(m.mean[0]) < 4 * m.mean_se[0]);
    CHECK(std::abs(m.cov(0, 0) - 1.0) < 4 * m.cov_se(0, 0));
    CHECK(std::abs(m.cov(0, 1)) < 4 * m.cov_se(0, 1));
    // Var(X^2) = 2 for a standard normal.
    CHECK(m.cov_se(0, 0) == doctest::Approx(std::sqrt(2.0 / 200000)).epsilon(0.02));
}

TEST_CASE("KS statistic") {
    CHECK(ks_statistic({0.5}, [](double x) { return x; }) == doctest::Approx(0.5));
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i) grid.push_back((i + 0.5) / 1000);
    CHECK(ks_statistic(grid, [](double x) { return x; }) == doctest::Approx(0.0005));
    CHECK(ks_critical_001(10000) == doctest::Approx(0.0163));

    Rng rng(5);
    std::vector<double> shifted;
    for (int i = 0; i < 10000; ++i) shifted.push_back(rng.normal() + 0.1);
    CHECK(ks_statistic(shifted, phi_cdf) > ks_critical_001(10000));
}
