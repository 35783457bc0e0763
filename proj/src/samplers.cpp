#include "truncpol/samplers.hpp"

#include <cmath>
#include <string>

namespace truncpol {
namespace {

Vec noise_of(DiagGaussian const& base, Vec const& value) {
    return ((value - base.mean).array() / base.stddev.array()).matrix();
}

Vec forward(DiagGaussian const& base, Vec const& noise) {
    return base.mean + base.stddev.cwiseProduct(noise);
}

// Snap a value to the representable point mean + stddev .* noise so the
// reconstruction identity holds exactly.
SampleDraw finish_direct(DiagGaussian const& base, Vec const& value, SamplerKind kind,
                         std::int64_t attempts, std::int64_t steps) {
    SampleDraw out;
    out.noise = noise_of(base, value);
    out.value = forward(base, out.noise);
    out.method = kind;
    out.attempts = attempts;
    out.walk_steps = steps;
    return out;
}

void assert_inside(ConstraintSet const& set, Vec const& value, char const* who) {
    if (!contains(set, value, kContainmentSlack)) {
        throw InvariantViolation(std::string(who) + ": sample left the target set");
    }
}

HPolytope as_polytope(ConstraintSet const& set, char const* who) {
    if (auto const* p = std::get_if<HPolytope>(&set)) return *p;
    if (auto const* b = std::get_if<Interval>(&set)) return HPolytope::from_interval(*b);
    throw PreconditionError(std::string(who) + ": random walk needs a polytope or interval");
}

}  // namespace

char const* to_string(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::InverseTransform: return "inverse_transform";
        case SamplerKind::Rejection: return "rejection";
        case SamplerKind::Rdhr: return "rdhr";
        case SamplerKind::Hybrid: return "hybrid";
    }
    return "?";
}

namespace {

template <class Set>
RejectionResult rejection_impl(DiagGaussian const& base, Set const& set, std::int64_t max_attempts,
                               Rng& rng) {
    if (max_attempts < 1) throw ArgumentError("rejection_sample: max_attempts must be >= 1");
    if (set.dim() != base.dim()) throw ArgumentError("rejection_sample: dimension mismatch");
    RejectionResult res;
    Eigen::Index const d = base.dim();
    Vec eps(d), q(d);
    for (res.attempts = 1; res.attempts <= max_attempts; ++res.attempts) {
        for (Eigen::Index i = 0; i < d; ++i) eps[i] = rng.normal();
        q.noalias() = base.mean + base.stddev.cwiseProduct(eps);
        if (contains(set, q)) {
            res.draw = SampleDraw{std::move(q), std::move(eps), SamplerKind::Rejection, res.attempts, 0};
            return res;
        }
    }
    res.attempts = max_attempts;
    return res;
}

}  // namespace

RejectionResult rejection_sample(DiagGaussian const& base, ConstraintSet const& set,
                                 std::int64_t max_attempts, Rng& rng) {
    return std::visit([&](auto const& s) { return rejection_impl(base, s, max_attempts, rng); }, set);
}

RejectionResult rejection_sample(DiagGaussian const& base, HPolytope const& poly,
                                 std::int64_t max_attempts, Rng& rng) {
    return rejection_impl(base, poly, max_attempts, rng);
}

RejectionResult rejection_sample(DiagGaussian const& base, Interval const& box,
                                 std::int64_t max_attempts, Rng& rng) {
    return rejection_impl(base, box, max_attempts, rng);
}

RdhrWalker::RdhrWalker(DiagGaussian target, HPolytope poly, std::optional<Vec> start)
    : target_(std::move(target)), poly_(std::move(poly)) {
    if (target_.dim() != poly_.dim()) throw ArgumentError("RdhrWalker: dimension mismatch");
    if (start) {
        reset(*start);
    } else {
        state_ = chebyshev_center(poly_).center;
    }
}

void RdhrWalker::reset(Vec start) {
    if (start.size() != poly_.dim()) throw ArgumentError("RdhrWalker: start dimension mismatch");
    for (Eigen::Index j = 0; j < poly_.rows(); ++j) {
        if (!(poly_.normals().row(j).dot(start) < poly_.offsets()[j])) {
            throw PreconditionError("RdhrWalker: start point not strictly interior");
        }
    }
    state_ = std::move(start);
}

void RdhrWalker::walk(int steps, Rng& rng) {
    Eigen::Index const d = poly_.dim();
    Vec const inv_var = target_.stddev.cwiseAbs2().cwiseInverse();
    for (int s = 0; s < steps; ++s) {
        Vec const u = rng.unit_direction(d);
        auto const [tmin, tmax] = detail::chord_from(poly_, state_, u);
        double const y = rng.uniform();
        if (!(tmin < tmax)) continue;
        // Along x + t u the target is Gaussian in t.
        double const prec = u.cwiseAbs2().dot(inv_var);
        double const lin = u.cwiseProduct(inv_var).dot(state_ - target_.mean);
        Normal1d const line{-lin / prec, 1.0 / std::sqrt(prec)};
        double t;
        try {
            t = TruncNormal1d(line, tmin, tmax).quantile(y);
        } catch (UnderflowError const&) {
            t = std::abs(tmin - line.mu) < std::abs(tmax - line.mu) ? tmin : tmax;
        }
        state_ += t * u;
    }
}

SampleDraw rdhr_sample(DiagGaussian const& base, HPolytope const& poly, RdhrConfig const& cfg,
                       Rng& rng) {
    if (cfg.burn_in < 0) throw ArgumentError("rdhr_sample: burn_in must be >= 0");
    RdhrWalker walker(base, poly, cfg.start);
    int const steps = cfg.burn_in + cfg.thin_for(poly.dim());
    walker.walk(steps, rng);
    SampleDraw out = finish_direct(base, walker.state(), SamplerKind::Rdhr, 0, steps);
    assert_inside(poly, out.value, "rdhr_sample");
    return out;
}

SampleDraw rdhr_sample(DiagGaussian const& base, Interval const& box, RdhrConfig const& cfg,
                       Rng& rng) {
    return rdhr_sample(base, HPolytope::from_interval(box), cfg, rng);
}

SampleDraw hybrid_sample(DiagGaussian const& base, ConstraintSet const& set, std::int64_t M,
                         RdhrConfig const& cfg, Rng& rng) {
    RejectionResult rej = rejection_sample(base, set, M, rng);
    if (rej.draw) return std::move(*rej.draw);
    SampleDraw out = rdhr_sample(base, as_polytope(set, "hybrid_sample"), cfg, rng);
    out.attempts = rej.attempts;
    out.method = SamplerKind::Rdhr;
    return out;
}

HybridSampler::HybridSampler(DiagGaussian base, HPolytope poly, std::int64_t M, RdhrConfig cfg)
    : base_(std::move(base)), poly_(std::move(poly)), M_(M), cfg_(std::move(cfg)) {
    if (M_ < 1) throw ArgumentError("HybridSampler: M must be >= 1");
}

SampleDraw HybridSampler::draw(Rng& rng) {
    RejectionResult rej = rejection_sample(base_, poly_, M_, rng);
    if (rej.draw) return std::move(*rej.draw);
    int steps = cfg_.thin_for(poly_.dim());
    if (!walker_) {
        walker_.emplace(base_, poly_, cfg_.start);
        steps += cfg_.burn_in;
    }
    walker_->walk(steps, rng);
    SampleDraw out = finish_direct(base_, walker_->state(), SamplerKind::Rdhr, rej.attempts, steps);
    assert_inside(poly_, out.value, "HybridSampler");
    return out;
}

SampleDraw reparam_sample(DiagGaussian const& base, ConstraintSet const& set, SamplerKind sampler,
                          Rng& rng, ReparamOptions const& opts) {
    Eigen::Index const d = base.dim();
    if (dim(set) != d) throw ArgumentError("reparam_sample: dimension mismatch");
    ConstraintSet const pre = affine_preimage(set, base.mean, base.stddev);
    DiagGaussian const standard(Vec::Zero(d), Vec::Ones(d));

    SampleDraw out;
    switch (sampler) {
        case SamplerKind::InverseTransform: {
            auto const* box = std::get_if<Interval>(&pre);
            if (!box) throw PreconditionError("reparam_sample: inverse transform needs an interval");
            FactorizedTrunc const std_trunc(standard, *box);
            out.noise = std_trunc.sample(rng);
            out.attempts = 0;
            break;
        }
        case SamplerKind::Rejection: {
            RejectionResult rej = rejection_sample(standard, pre, opts.rejection_cap, rng);
            if (!rej.draw) {
                throw NumericError("reparam_sample: rejection cap exhausted",
                                   static_cast<double>(rej.attempts));
            }
            out.noise = rej.draw->value;
            out.attempts = rej.attempts;
            break;
        }
        case SamplerKind::Rdhr:
        case SamplerKind::Hybrid: {
            std::int64_t attempts = 0;
            if (sampler == SamplerKind::Hybrid) {
                RejectionResult rej = rejection_sample(standard, pre, opts.M, rng);
                attempts = rej.attempts;
                if (rej.draw) {
                    out.noise = rej.draw->value;
                    out.attempts = attempts;
                    break;
                }
            }
            RdhrWalker walker(standard, as_polytope(pre, "reparam_sample"), opts.rdhr.start);
            int const steps = opts.rdhr.burn_in + opts.rdhr.thin_for(d);
            walker.walk(steps, rng);
            out.noise = walker.state();
            out.attempts = attempts;
            out.walk_steps = steps;
            break;
        }
    }
    out.method = sampler;
    if (sampler == SamplerKind::Hybrid) {
        out.method = out.walk_steps > 0 ? SamplerKind::Rdhr : SamplerKind::Rejection;
    }
    out.value = forward(base, out.noise);
    assert_inside(set, out.value, "reparam_sample");
    return out;
}

SampleDraw union_sample(UnionTrunc const& dist, Rng& rng) {
    Vec const& w = dist.weights();
    double const y = rng.uniform();
    std::size_t pick = 0;
    double cum = 0.0;
    for (; pick + 1 < static_cast<std::size_t>(w.size()); ++pick) {
        cum += w[pick];
        if (y < cum) break;
    }
    FactorizedTrunc const& comp = dist.components()[pick];
    SampleDraw out;
    out.noise.resize(dist.dim());
    for (Eigen::Index i = 0; i < dist.dim(); ++i) {
        out.noise[i] = comp.marginals()[i].std_quantile(rng.uniform());
    }
    out.value = forward(dist.base(), out.noise);
    out.method = SamplerKind::InverseTransform;
    out.member = static_cast<int>(pick);
    return out;
}

FallbackDraw rejection_with_fallback(DiagGaussian const& base, ConstraintSet const& set,
                                     std::int64_t M, std::function<Vec()> const& fallback,
                                     Rng& rng) {
    RejectionResult rej = rejection_sample(base, set, M, rng);
    if (rej.draw) return {*rej.draw, false};
    Vec const a = fallback();
    if (!contains(set, a, kContainmentSlack)) {
        throw PreconditionError("rejection_with_fallback: fallback action is infeasible");
    }
    FallbackDraw out{finish_direct(base, a, SamplerKind::Rejection, rej.attempts, 0), true};
    return out;
}

}  // namespace truncpol
