#include "truncpol/stats.hpp"

#include <algorithm>
#include <cmath>

#include "truncpol/errors.hpp"

namespace truncpol {

double mean_of(std::vector<double> const& xs) {
    if (xs.empty()) throw ArgumentError("mean_of: empty input");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stddev_of(std::vector<double> const& xs) {
    if (xs.size() < 2) throw ArgumentError("stddev_of: need two values");
    double const m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double quantile_of(std::vector<double> xs, double p) {
    if (xs.empty()) throw ArgumentError("quantile_of: empty input");
    if (!(p >= 0 && p <= 1)) throw ArgumentError("quantile_of: p outside [0, 1]");
    std::sort(xs.begin(), xs.end());
    double const pos = p * static_cast<double>(xs.size() - 1);
    auto const lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t const hi = std::min(lo + 1, xs.size() - 1);
    double const frac = pos - static_cast<double>(lo);
    return xs[lo] + frac * (xs[hi] - xs[lo]);
}

}  // namespace truncpol
