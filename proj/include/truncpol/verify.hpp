#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "truncpol/geometry.hpp"
#include "truncpol/rng.hpp"

namespace truncpol {

struct PropertyResult {
    std::string name;
    int instances = 0;
    /// Worst observed value of the property's statistic.
    double max_deviation = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string note;
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    int mixture_unions = 100;
    int mixture_points = 10000;
    int entropy_unions = 50;
    std::int64_t entropy_samples = 1000000;
    int reparam_polytopes_per_dim = 20;
    std::int64_t reparam_draws = 100000;
    int preimage_points = 10000;
};

/// Random union of 1-4 boxes in dimension 1-3, separated along axis 0.
IntervalUnion random_union(int d, Rng& rng);
DiagGaussian random_union_base(int d, Rng& rng);

/// Mixture density against the direct truncated density.
PropertyResult check_union_mixture(VerifyOptions const& opts);
/// Closed-form union entropy against a Monte Carlo estimate, in standard errors.
PropertyResult check_union_entropy(VerifyOptions const& opts);
/// Reparameterized against direct hybrid sampling: worst two-sample z score
/// over mean and covariance entries; also checks value == mean + stddev .* noise.
PropertyResult check_reparam_moments(VerifyOptions const& opts);
/// Points of the preimage map into the set and back.
PropertyResult check_preimage_identity(VerifyOptions const& opts);

std::vector<PropertyResult> verify_all(VerifyOptions const& opts);
void write_verify_csv(std::string const& path, std::vector<PropertyResult> const& results);

}  // namespace truncpol
