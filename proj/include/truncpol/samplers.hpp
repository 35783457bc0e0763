#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "truncpol/geometry.hpp"
#include "truncpol/rng.hpp"
#include "truncpol/truncmvn.hpp"

namespace truncpol {

enum class SamplerKind { InverseTransform, Rejection, Rdhr, Hybrid };

char const* to_string(SamplerKind kind);

/// A feasible action with its standardized noise: value == mean + stddev .* noise.
struct SampleDraw {
    Vec value;
    Vec noise;
    SamplerKind method = SamplerKind::Rejection;
    std::int64_t attempts = 0;
    std::int64_t walk_steps = 0;
    /// Union member the draw came from; -1 for convex sets.
    int member = -1;
};

struct RdhrConfig {
    int burn_in = 50;
    /// Steps after burn-in; nonpositive means 10 * d.
    int thin = 0;
    /// Start point in the sampled space; defaults to the Chebyshev center.
    std::optional<Vec> start;

    int thin_for(Eigen::Index d) const { return thin > 0 ? thin : static_cast<int>(10 * d); }
};

inline constexpr std::int64_t kDefaultRejectionLimit = 100;

struct RejectionResult {
    std::optional<SampleDraw> draw;
    std::int64_t attempts = 0;

    bool exhausted() const { return !draw.has_value(); }
};

/// Proposes mean + stddev .* eps until one lands in `set`, at most
/// `max_attempts` times. Exhaustion is reported, not thrown.
RejectionResult rejection_sample(DiagGaussian const& base, ConstraintSet const& set,
                                 std::int64_t max_attempts, Rng& rng);
RejectionResult rejection_sample(DiagGaussian const& base, HPolytope const& poly,
                                 std::int64_t max_attempts, Rng& rng);
RejectionResult rejection_sample(DiagGaussian const& base, Interval const& box,
                                 std::int64_t max_attempts, Rng& rng);

/// Random-direction hit-and-run targeting `target` restricted to `poly`.
/// Each step picks a uniform direction, intersects the chord, and draws the
/// position on the chord from the exact one-dimensional conditional.
class RdhrWalker {
  public:
    RdhrWalker(DiagGaussian target, HPolytope poly, std::optional<Vec> start = std::nullopt);

    Vec const& state() const { return state_; }
    HPolytope const& polytope() const { return poly_; }
    void reset(Vec start);

    /// Advance the chain by `steps` moves.
    void walk(int steps, Rng& rng);

  private:
    DiagGaussian target_;
    HPolytope poly_;
    Vec state_;
};

/// One draw from a fresh chain in action space: burn_in + thin steps.
SampleDraw rdhr_sample(DiagGaussian const& base, HPolytope const& poly, RdhrConfig const& cfg,
                       Rng& rng);
SampleDraw rdhr_sample(DiagGaussian const& base, Interval const& box, RdhrConfig const& cfg,
                       Rng& rng);

/// Rejection for up to M proposals, then hit-and-run.
SampleDraw hybrid_sample(DiagGaussian const& base, ConstraintSet const& set, std::int64_t M,
                         RdhrConfig const& cfg, Rng& rng);

/// Repeated hybrid draws from one distribution. The fallback chain is
/// started (burn-in included) on the first exhausted rejection round and
/// continued by `thin` steps on later ones.
class HybridSampler {
  public:
    HybridSampler(DiagGaussian base, HPolytope poly, std::int64_t M, RdhrConfig cfg = {});
    SampleDraw draw(Rng& rng);
    bool chain_started() const { return walker_.has_value(); }

  private:
    DiagGaussian base_;
    HPolytope poly_;
    std::int64_t M_;
    RdhrConfig cfg_;
    std::optional<RdhrWalker> walker_;
};

struct ReparamOptions {
    std::int64_t M = kDefaultRejectionLimit;
    RdhrConfig rdhr;
    /// Proposal cap when the pure rejection sampler is selected.
    std::int64_t rejection_cap = 1000000;
};

/// Draws noise from N(0, I) truncated to the preimage of `set` under
/// eps -> mean + stddev .* eps, then maps it forward. The returned noise is
/// exactly the drawn eps, so d value / d mean = 1 and d value / d stddev = noise.
SampleDraw reparam_sample(DiagGaussian const& base, ConstraintSet const& set, SamplerKind sampler,
                          Rng& rng, ReparamOptions const& opts = {});

/// Picks member i with probability w_i, then inverse-transform samples it.
SampleDraw union_sample(UnionTrunc const& dist, Rng& rng);

struct FallbackDraw {
    SampleDraw draw;
    bool used_fallback = false;
};

/// Capped rejection for non-convex sets; on exhaustion returns the caller's
/// fallback action. Biased whenever the fallback fires.
FallbackDraw rejection_with_fallback(DiagGaussian const& base, ConstraintSet const& set,
                                     std::int64_t M, std::function<Vec()> const& fallback,
                                     Rng& rng);

/// Slack used when asserting sampler outputs lie in their target set.
inline constexpr double kContainmentSlack = 1e-9;

}  // namespace truncpol
