#pragma once

#include <string>
#include <vector>

#include "truncpol/dataset.hpp"
#include "truncpol/samplers.hpp"

namespace truncpol {

struct IntegralRow {
    int id = 0;
    int dim = 0;
    ApproxMode method = ApproxMode::Inner;
    double z_method = 0.0;
    double z_oracle = 0.0;
    double oracle_std_error = 0.0;
    /// |z_method - z_oracle| / mean oracle mass of the instance's dimension.
    double normalized_error = 0.0;
    bool low_mass_fallback = false;
};

/// Distribution of one quantity for one (dimension, method) pair.
struct SummaryRow {
    int dim = 0;
    std::string method;
    std::size_t count = 0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

struct IntegralBench {
    std::vector<IntegralRow> rows;
    std::vector<SummaryRow> summary;
};

IntegralBench bench_integral(Dataset const& ds);
void write_integral_csv(std::string const& path, IntegralBench const& bench);

inline constexpr std::int64_t kRejectionSafetyCap = 1000000;

struct SamplingOptions {
    std::int64_t M = kDefaultRejectionLimit;
    int n_per_instance = 10;
    int repetitions = 5;
    std::uint64_t seed = 0;
    RdhrConfig rdhr;
    std::int64_t rejection_cap = kRejectionSafetyCap;
};

struct SamplingRow {
    int id = 0;
    int dim = 0;
    std::string method;
    double z_oracle = 0.0;
    /// Median over repetitions of (wall time / n_per_instance).
    double seconds_per_sample = 0.0;
    /// Rejection hit the safety cap on at least one draw.
    bool censored = false;
    double mean_proposals = 0.0;
    double walk_fraction = 0.0;
};

struct SamplingBench {
    std::vector<SamplingRow> rows;
    std::vector<SummaryRow> summary;
    /// Same statistics over the instances whose oracle mass is in the
    /// lowest 10% of the dataset (dim = 0 marks the pooled rows).
    std::vector<SummaryRow> low_mass;
};

SamplingBench bench_sampling(Dataset const& ds, SamplingOptions const& opts);
void write_sampling_csv(std::string const& path, SamplingBench const& bench);

void write_summary_csv(std::string const& path, std::vector<SummaryRow> const& rows);
/// "out.csv" -> "out_<suffix>.csv".
std::string sibling_path(std::string const& path, std::string const& suffix);

SummaryRow summarize(int dim, std::string method, std::vector<double> const& values);

}  // namespace truncpol
