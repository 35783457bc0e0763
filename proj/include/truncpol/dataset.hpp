#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "truncpol/geometry.hpp"
#include "truncpol/oracle.hpp"
#include "truncpol/serialization.hpp"

namespace truncpol {

struct DatasetInstance {
    int id = 0;
    int dim = 0;
    HPolytope polytope;
    Vec mu;
    Vec sigma;
    OracleEstimate oracle_Z;

    DiagGaussian base() const { return DiagGaussian(mu, sigma); }
    Json to_json() const;
    static DatasetInstance from_json(Json const& j);
    bool operator==(DatasetInstance const& other) const;
};

/// One unbalanced draw of the benchmark recipe: the box [-1, 1]^d cut by
/// n_P ~ U{d..4d} random halfspaces around x0, a mean offset from the
/// Chebyshev center, and stddevs in [0.1, 1]. No oracle value is set.
DatasetInstance random_instance(int d, Rng& rng);

struct DatasetOptions {
    std::vector<int> dims{2, 3, 4, 5, 6};
    int per_dim = 1000;
    std::uint64_t seed = 0;
    /// Oracle draws per instance for d <= 4 and for d >= 5.
    std::int64_t oracle_samples_low = 10000000;
    std::int64_t oracle_samples_high = 40000000;
    /// Draws of the cheap estimate used only for mass binning.
    std::int64_t pilot_samples = 4000;

    void validate() const;
};

/// Equal-width bins of log10 mass on [log10_low, 0]; smaller masses fall
/// in the lowest bin. log10_low is fixed per dimension from the 2nd
/// percentile of the first batch of pilot estimates.
struct MassBins {
    static constexpr int kCount = 5;
    double log10_low = -3.0;

    int bin(double z) const;
    std::vector<double> edges() const;
};

struct Dataset {
    Json header;
    std::vector<DatasetInstance> instances;
};

Dataset generate_dataset(DatasetOptions const& opts);
void write_dataset(std::string const& path, Dataset const& ds);
Dataset read_dataset(std::string const& path);

}  // namespace truncpol
