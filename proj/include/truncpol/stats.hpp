#pragma once

#include <vector>

namespace truncpol {

double mean_of(std::vector<double> const& xs);
/// Sample standard deviation (n - 1 denominator).
double stddev_of(std::vector<double> const& xs);
/// Linearly interpolated quantile, p in [0, 1].
double quantile_of(std::vector<double> xs, double p);
inline double median_of(std::vector<double> xs) { return quantile_of(std::move(xs), 0.5); }

}  // namespace truncpol
