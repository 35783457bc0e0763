#pragma once

#include <cstdint>
#include <random>

#include "truncpol/types.hpp"

namespace truncpol {

/// Seeded random stream. Each worker owns its own instance.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return unit_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return normal_(engine_); }
    /// Uniform integer on [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }

    Vec normal_vec(Eigen::Index d) {
        Vec v(d);
        for (Eigen::Index i = 0; i < d; ++i) v[i] = normal();
        return v;
    }

    /// Direction drawn uniformly from the unit sphere.
    Vec unit_direction(Eigen::Index d);

    std::mt19937_64& engine() { return engine_; }

    /// Seed for an independent stream derived from (master, stream).
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream);

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace truncpol
