#include "truncpol/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "truncpol/csv.hpp"
#include "truncpol/dataset.hpp"
#include "truncpol/oracle.hpp"
#include "truncpol/samplers.hpp"
#include "truncpol/truncmvn.hpp"

namespace truncpol {
namespace {

constexpr std::uint64_t kMixtureStream = 1;
constexpr std::uint64_t kEntropyStream = 2;
constexpr std::uint64_t kReparamStream = 3;
constexpr std::uint64_t kPreimageStream = 4;

Rng stream(VerifyOptions const& opts, std::uint64_t which, std::uint64_t k) {
    return Rng(Rng::derive(opts.seed, (which << 32) | k));
}

// Two-sample z scores over every mean and covariance entry.
double worst_z(Moments const& a, Moments const& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.mean.size(); ++i) {
        double const se = std::hypot(a.mean_se[i], b.mean_se[i]);
        worst = std::max(worst, std::abs(a.mean[i] - b.mean[i]) / se);
        for (Eigen::Index j = 0; j <= i; ++j) {
            double const se_c = std::hypot(a.cov_se(i, j), b.cov_se(i, j));
            worst = std::max(worst, std::abs(a.cov(i, j) - b.cov(i, j)) / se_c);
        }
    }
    return worst;
}

}  // namespace

IntervalUnion random_union(int d, Rng& rng) {
    auto const k = static_cast<std::size_t>(rng.integer(1, 4));
    // 2k sorted cut points along axis 0; member i spans [c_2i, c_2i+1].
    std::vector<double> cuts(2 * k);
    for (auto& c : cuts) c = rng.uniform(-2.5, 2.5);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Interval> members;
    for (std::size_t i = 0; i < k; ++i) {
        Vec lo(d), hi(d);
        lo[0] = cuts[2 * i];
        hi[0] = std::max(cuts[2 * i + 1], cuts[2 * i] + 0.05);
        if (i + 1 < k) hi[0] = std::min(hi[0], cuts[2 * i + 2]);
        for (int j = 1; j < d; ++j) {
            double const a = rng.uniform(-2.0, 1.5);
            lo[j] = a;
            hi[j] = a + rng.uniform(0.2, 2.0);
        }
        if (!(lo[0] < hi[0])) hi[0] = lo[0] + 1e-3;
        members.emplace_back(lo, hi);
    }
    return IntervalUnion(std::move(members));
}

DiagGaussian random_union_base(int d, Rng& rng) {
    Vec mu(d), sigma(d);
    for (int i = 0; i < d; ++i) {
        mu[i] = rng.uniform(-1.0, 1.0);
        sigma[i] = rng.uniform(0.3, 1.5);
    }
    return DiagGaussian(mu, sigma);
}

PropertyResult check_union_mixture(VerifyOptions const& opts) {
    PropertyResult res{"union_mixture_identity", opts.mixture_unions, 0.0, 1e-12, false, ""};
    for (int u = 0; u < opts.mixture_unions; ++u) {
        Rng rng = stream(opts, kMixtureStream, static_cast<std::uint64_t>(u));
        int const d = static_cast<int>(rng.integer(1, 3));
        UnionTrunc const dist(random_union_base(d, rng), random_union(d, rng));
        Vec lo = dist.set().members().front().lower(), hi = dist.set().members().front().upper();
        for (auto const& m : dist.set().members()) {
            lo = lo.cwiseMin(m.lower());
            hi = hi.cwiseMax(m.upper());
        }
        Vec x(d);
        for (int p = 0; p < opts.mixture_points; ++p) {
            for (int i = 0; i < d; ++i) x[i] = rng.uniform(lo[i] - 0.5, hi[i] + 0.5);
            double const direct = std::exp(dist.log_pdf(x));
            res.max_deviation = std::max(res.max_deviation, std::abs(dist.pdf(x) - direct));
        }
    }
    res.passed = res.max_deviation < res.threshold;
    res.note = "max |sum_i w_i f(x; I_i) - f(x; U)| over uniform points around each union";
    return res;
}

PropertyResult check_union_entropy(VerifyOptions const& opts) {
    PropertyResult res{"union_entropy_closed_form", opts.entropy_unions, 0.0, 3.0, false, ""};
    double worst_unweighted = 0.0;
    int unweighted_fail = 0;
    for (int u = 0; u < opts.entropy_unions; ++u) {
        Rng rng = stream(opts, kEntropyStream, static_cast<std::uint64_t>(u));
        int const d = static_cast<int>(rng.integer(1, 3));
        UnionTrunc const dist(random_union_base(d, rng), random_union(d, rng));
        OracleEstimate const mc = mc_entropy([&](Rng& r) { return union_sample(dist, r).value; },
                                             [&](Vec const& x) { return dist.log_pdf(x); },
                                             opts.entropy_samples, rng.engine()());
        double const z = std::abs(dist.entropy() - mc.value) / mc.std_error;
        double const z_alt = std::abs(dist.entropy_unweighted_components() - mc.value) / mc.std_error;
        res.max_deviation = std::max(res.max_deviation, z);
        worst_unweighted = std::max(worst_unweighted, z_alt);
        unweighted_fail += z_alt > 3.0 ? 1 : 0;
    }
    res.passed = res.max_deviation < res.threshold;
    std::ostringstream note;
    note << "standard errors from the Monte Carlo entropy; the variant without w_i on the "
            "component entropies misses on "
         << unweighted_fail << " unions (worst " << worst_unweighted << " standard errors)";
    res.note = note.str();
    return res;
}

PropertyResult check_reparam_moments(VerifyOptions const& opts) {
    PropertyResult res{"reparam_moment_agreement", 0, 0.0, 3.0, false, ""};
    bool exact = true;
    std::int64_t walked = 0, total = 0;
    for (int d : {2, 3}) {
        for (int k = 0; k < opts.reparam_polytopes_per_dim; ++k) {
            Rng rng = stream(opts, kReparamStream, static_cast<std::uint64_t>(d * 1000 + k));
            DatasetInstance const inst = random_instance(d, rng);
            DiagGaussian const base = inst.base();
            ReparamOptions ro;
            ro.rdhr.start = chebyshev_center(affine_preimage(inst.polytope, base.mean, base.stddev)).center;
            RdhrConfig direct_cfg;
            direct_cfg.start = chebyshev_center(inst.polytope).center;
            std::vector<Vec> direct, reparam;
            direct.reserve(static_cast<std::size_t>(opts.reparam_draws));
            reparam.reserve(static_cast<std::size_t>(opts.reparam_draws));
            for (std::int64_t n = 0; n < opts.reparam_draws; ++n) {
                direct.push_back(hybrid_sample(base, inst.polytope, kDefaultRejectionLimit, direct_cfg, rng).value);
                SampleDraw const r = reparam_sample(base, inst.polytope, SamplerKind::Hybrid, rng, ro);
                Vec const rebuilt = base.mean + base.stddev.cwiseProduct(r.noise);
                exact = exact && (rebuilt.array() == r.value.array()).all();
                walked += r.walk_steps > 0 ? 1 : 0;
                reparam.push_back(r.value);
            }
            total += opts.reparam_draws;
            res.max_deviation = std::max(res.max_deviation, worst_z(moments_of(direct), moments_of(reparam)));
            ++res.instances;
        }
    }
    res.passed = exact && res.max_deviation < res.threshold;
    std::ostringstream note;
    note << "worst two-sample z over mean and covariance entries; reconstruction identity "
         << (exact ? "bit-exact on every draw" : "VIOLATED") << "; " << walked << " of " << total
         << " reparameterized draws used the random walk";
    res.note = note.str();
    return res;
}

PropertyResult check_preimage_identity(VerifyOptions const& opts) {
    PropertyResult res{"reparam_preimage_identity", 20, 0.0, 0.0, false, ""};
    int mismatches = 0;
    for (int k = 0; k < res.instances; ++k) {
        Rng rng = stream(opts, kPreimageStream, static_cast<std::uint64_t>(k));
        int const d = static_cast<int>(rng.integer(2, 4));
        DatasetInstance const inst = random_instance(d, rng);
        HPolytope const pre = affine_preimage(inst.polytope, inst.mu, inst.sigma);
        for (int p = 0; p < opts.preimage_points / res.instances; ++p) {
            Vec x(d);
            for (int i = 0; i < d; ++i) x[i] = rng.uniform(-3.0, 3.0);
            Vec const a = inst.mu + inst.sigma.cwiseProduct(x);
            // Membership must agree unless the point is within rounding of a facet.
            Vec const margin = inst.polytope.normals() * a - inst.polytope.offsets();
            if (margin.cwiseAbs().minCoeff() < 1e-9) continue;
            if (contains(pre, x) != contains(inst.polytope, a)) ++mismatches;
        }
    }
    res.max_deviation = mismatches;
    res.passed = mismatches == 0;
    res.note = "membership of x in the preimage versus mean + stddev .* x in the polytope";
    return res;
}

std::vector<PropertyResult> verify_all(VerifyOptions const& opts) {
    return {check_union_mixture(opts), check_union_entropy(opts), check_reparam_moments(opts),
            check_preimage_identity(opts)};
}

void write_verify_csv(std::string const& path, std::vector<PropertyResult> const& results) {
    CsvWriter csv(path);
    csv.header({"property", "instances", "max_deviation", "threshold", "passed", "note"});
    for (auto const& r : results)
        csv.row({r.name, std::to_string(r.instances), format_real(r.max_deviation), format_real(r.threshold),
                 r.passed ? "1" : "0", "\"" + r.note + "\""});
}

}  // namespace truncpol
