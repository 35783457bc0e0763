#include "truncpol/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace truncpol {

OracleEstimate mc_Z(DiagGaussian const& base, ConstraintSet const& set, std::int64_t n,
                    std::uint64_t seed) {
    if (n < 1000) throw ArgumentError("mc_Z: need n >= 1000");
    if (dim(set) != base.dim()) throw ArgumentError("mc_Z: dimension mismatch");
    Rng rng(seed);
    Eigen::Index const d = base.dim();
    Vec q(d);
    std::int64_t hits = 0;
    auto run = [&](auto const& s) {
        for (std::int64_t k = 0; k < n; ++k) {
            for (Eigen::Index i = 0; i < d; ++i) q[i] = base.mean[i] + base.stddev[i] * rng.normal();
            if (contains(s, q)) ++hits;
        }
    };
    std::visit(run, set);
    double const p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, seed};
}

OracleEstimate mc_entropy(SampleFn const& sample, LogPdfFn const& log_pdf, std::int64_t n,
                          std::uint64_t seed) {
    if (n < 2) throw ArgumentError("mc_entropy: need n >= 2");
    Rng rng(seed);
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        double const v = -log_pdf(sample(rng));
        double const delta = v - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (v - mean);
    }
    double const var = m2 / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n, seed};
}

Moments moments_of(std::vector<Vec> const& draws) {
    if (draws.size() < 2) throw ArgumentError("moments_of: need at least two draws");
    Eigen::Index const d = draws.front().size();
    double const n = static_cast<double>(draws.size());
    Moments m;
    m.n = static_cast<std::int64_t>(draws.size());
    m.mean = Vec::Zero(d);
    for (auto const& x : draws) m.mean += x;
    m.mean /= n;
    m.cov = Mat::Zero(d, d);
    Mat fourth = Mat::Zero(d, d);
    for (auto const& x : draws) {
        Vec const c = x - m.mean;
        Mat const outer = c * c.transpose();
        m.cov += outer;
        fourth += outer.cwiseAbs2();
    }
    m.cov /= n - 1.0;
    // Var of the product terms gives the covariance-entry standard errors.
    Mat const prod_var = (fourth / n - m.cov.cwiseAbs2()).cwiseMax(0.0);
    m.cov_se = (prod_var / n).cwiseSqrt();
    m.mean_se = (m.cov.diagonal() / n).cwiseSqrt();
    return m;
}

Moments mc_moments(SampleFn const& sample, std::int64_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec> draws;
    draws.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) draws.push_back(sample(rng));
    return moments_of(draws);
}

double ks_statistic(std::vector<double> samples, std::function<double(double)> const& cdf) {
    if (samples.empty()) throw ArgumentError("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    double const n = static_cast<double>(samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double const f = cdf(samples[i]);
        double const below = static_cast<double>(i) / n;
        double const above = static_cast<double>(i + 1) / n;
        worst = std::max({worst, f - below, above - f});
    }
    return worst;
}

double ks_critical_001(std::int64_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

}  // namespace truncpol
