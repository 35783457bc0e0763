#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "truncpol/geometry.hpp"
#include "truncpol/rng.hpp"

namespace truncpol {

/// Monte Carlo estimate with its standard error.
struct OracleEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Fraction of n draws from `base` that land in `set`.
OracleEstimate mc_Z(DiagGaussian const& base, ConstraintSet const& set, std::int64_t n,
                    std::uint64_t seed);

using SampleFn = std::function<Vec(Rng&)>;
using LogPdfFn = std::function<double(Vec const&)>;

/// -mean log pdf over n draws of the distribution.
OracleEstimate mc_entropy(SampleFn const& sample, LogPdfFn const& log_pdf, std::int64_t n,
                          std::uint64_t seed);

struct Moments {
    Vec mean;
    Mat cov;
    Vec mean_se;
    Mat cov_se;
    std::int64_t n = 0;
};

Moments mc_moments(SampleFn const& sample, std::int64_t n, std::uint64_t seed);
/// Sample statistics of precomputed draws (one per row).
Moments moments_of(std::vector<Vec> const& draws);

/// sup_x |F_n(x) - cdf(x)| for the empirical CDF F_n of `samples`.
double ks_statistic(std::vector<double> samples, std::function<double(double)> const& cdf);

/// Critical value c(alpha)/sqrt(n) for alpha = 0.01.
double ks_critical_001(std::int64_t n);

}  // namespace truncpol
