#include "truncpol/rng.hpp"

namespace truncpol {

Vec Rng::unit_direction(Eigen::Index d) {
    for (;;) {
        Vec v = normal_vec(d);
        double const n = v.norm();
        if (n > 1e-300) return v / n;
    }
}

std::uint64_t Rng::derive(std::uint64_t master, std::uint64_t stream) {
    // splitmix64 over a mix of both inputs
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace truncpol
