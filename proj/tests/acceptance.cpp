// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed
// below; the only knobs are the work directory, the master seed and the
// oracle sample count used when regenerating the benchmark dataset.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "truncpol/bench.hpp"
#include "truncpol/dataset.hpp"
#include "truncpol/envs.hpp"
#include "truncpol/learning.hpp"
#include "truncpol/oracle.hpp"
#include "truncpol/samplers.hpp"
#include "truncpol/solvers.hpp"
#include "truncpol/stats.hpp"
#include "truncpol/truncmvn.hpp"
#include "truncpol/verify.hpp"

namespace tp = truncpol;
using tp::Rng;
using tp::Vec;

namespace {

// Pinned tolerances.
constexpr double kCombinedSlack = 1.05;
constexpr std::int64_t kHybridM = 100;
constexpr int kSamplesPerInstance = 10;
constexpr double kEntropyQuadTol = 1e-10;
constexpr double kEntropyTol = 1e-8;
constexpr std::int64_t kKsSamples = 100000;
constexpr double kGradRelTol = 1e-5;
constexpr double kClampTol = 1e-10;
constexpr int kModePoints = 10000;
constexpr int kSafetySteps = 10000;
constexpr int kRlSeeds = 10;
constexpr int kRlEpisodes = 300;
constexpr double kOneSidedZ95 = 1.6448536269514722;

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, std::string const& title, Verdict const& v, double seconds) {
    std::printf("%s %2d  %s  [%.0fs]\n      %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), seconds,
                v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
}

template <class F>
void run(int id, std::string const& title, F&& body) {
    auto const t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (std::exception const& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    report(id, title, v, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

tp::SummaryRow const& find_row(std::vector<tp::SummaryRow> const& rows, int dim, std::string const& method) {
    for (auto const& r : rows)
        if (r.dim == dim && r.method == method) return r;
    throw tp::ArgumentError("no summary row for dim " + std::to_string(dim) + " " + method);
}

struct Instance1d {
    double mu, sigma, lo, hi;
};

Instance1d random_1d(Rng& rng) {
    Instance1d in{rng.uniform(-2, 2), rng.uniform(0.2, 3), 0, 0};
    in.lo = in.mu + in.sigma * rng.uniform(-4, 3);
    in.hi = in.lo + in.sigma * rng.uniform(0.05, 5);
    return in;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// ---------------------------------------------------------------- 1
Verdict integral_ordering(tp::Dataset const& ds, std::string const& out_csv) {
    tp::IntegralBench const b = tp::bench_integral(ds);
    tp::write_integral_csv(out_csv, b);
    tp::write_summary_csv(tp::sibling_path(out_csv, "summary"), b.summary);
    bool ok = true;
    std::ostringstream s;
    s.precision(3);
    for (int d = 2; d <= 6; ++d) {
        double const in = find_row(b.summary, d, "inner").median;
        double const out = find_row(b.summary, d, "outer").median;
        double const comb = find_row(b.summary, d, "combined").median;
        bool const c1 = comb <= kCombinedSlack * std::min(in, out);
        bool const c2 = d == 2 || (out > in && out > comb);
        ok = ok && c1 && c2;
        s << "d=" << d << " median inner/outer/combined " << in << "/" << out << "/" << comb
          << (c1 && c2 ? "" : " <-") << "; ";
    }
    return {ok, s.str()};
}

// ---------------------------------------------------------------- 2
double iqr_log10(std::vector<double> t) {
    for (auto& x : t) x = std::log10(x);
    return tp::quantile_of(t, 0.75) - tp::quantile_of(t, 0.25);
}

Verdict sampling_times(tp::Dataset const& ds, std::uint64_t seed, std::string const& out_csv) {
    tp::SamplingOptions opts;
    opts.M = kHybridM;
    opts.n_per_instance = kSamplesPerInstance;
    opts.seed = seed;
    tp::SamplingBench const b = tp::bench_sampling(ds, opts);
    tp::write_sampling_csv(out_csv, b);
    tp::write_summary_csv(tp::sibling_path(out_csv, "summary"), b.summary);
    tp::write_summary_csv(tp::sibling_path(out_csv, "lowmass"), b.low_mass);

    std::ostringstream s;
    s.precision(3);
    double const hyb_max = find_row(b.low_mass, 0, "hybrid").max;
    double const rej_max = find_row(b.low_mass, 0, "rejection").max;
    bool const a = hyb_max < rej_max;
    s << "(a) lowest-mass decile max s/sample hybrid " << hyb_max << " vs rejection " << rej_max << "; ";

    bool bb = true;
    s << "(b) IQR of log10 time rdhr vs rejection:";
    for (int d = 2; d <= 6; ++d) {
        std::vector<double> rd, rj;
        for (auto const& r : b.rows) {
            if (r.dim != d) continue;
            if (r.method == "rdhr") rd.push_back(r.seconds_per_sample);
            if (r.method == "rejection") rj.push_back(r.seconds_per_sample);
        }
        double const qr = iqr_log10(rd), qj = iqr_log10(rj);
        bb = bb && qr < qj;
        s << " d=" << d << " " << qr << "/" << qj;
    }
    double const hyb_med = find_row(b.summary, 2, "hybrid").median;
    double const rej_med = find_row(b.summary, 2, "rejection").median;
    bool const c = hyb_med <= rej_med;
    s << "; (c) d=2 median hybrid " << hyb_med << " vs rejection " << rej_med;
    return {a && bb && c, s.str()};
}

// ---------------------------------------------------------------- 3-5
Verdict property(tp::PropertyResult const& r) {
    std::ostringstream s;
    s.precision(4);
    s << r.instances << " instances, worst " << r.max_deviation << " (limit " << r.threshold << "); " << r.note;
    return {r.passed, s.str()};
}

// Probability that the largest of `tests` independent |N(0,1)| draws is at
// least z_max. Reported next to the literal verdict of the z-score criteria.
std::string family_note(double z_max, int tests) {
    double const single = std::erfc(z_max / std::sqrt(2.0));
    double const family = -std::expm1(tests * std::log1p(-single));
    double const any_over_3 = -std::expm1(tests * std::log1p(-std::erfc(3.0 / std::sqrt(2.0))));
    std::ostringstream s;
    s.precision(3);
    s << "; calibration: " << tests << " z-scores, P(max |z| >= " << z_max << " | correct sampler) = " << family
      << ", P(any |z| > 3 | correct sampler) = " << any_over_3;
    return s.str();
}

Verdict z_property(tp::PropertyResult const& r, int tests) {
    Verdict v = property(r);
    v.detail += family_note(r.max_deviation, tests);
    return v;
}

// ---------------------------------------------------------------- 6
Verdict entropy_quadrature(std::uint64_t seed) {
    Rng rng(Rng::derive(seed, 6));
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        Instance1d const in = random_1d(rng);
        tp::TruncNormal1d const t({in.mu, in.sigma}, in.lo, in.hi);
        double const h = quadrature::simpson(
            [&](double x) {
                double const lp = t.log_pdf(x);
                return lp == tp::kNegInf ? 0.0 : -std::exp(lp) * lp;
            },
            in.lo, in.hi, kEntropyQuadTol);
        worst = std::max(worst, std::abs(t.entropy() - h));
    }
    std::ostringstream s;
    s << "100 instances, max |closed form - quadrature| = " << worst << " (limit " << kEntropyTol << ")";
    return {worst < kEntropyTol, s.str()};
}

// ---------------------------------------------------------------- 7
double binomial_tail(int n, int k, double p) {
    double below = 0.0, term = std::pow(1 - p, n);
    for (int i = 0; i < k; ++i) {
        below += term;
        term *= (n - i) / double(i + 1) * p / (1 - p);
    }
    return std::max(0.0, 1.0 - below);
}

Verdict ks_inverse_transform(std::uint64_t seed) {
    Rng rng(Rng::derive(seed, 7));
    double const crit = tp::ks_critical_001(kKsSamples);
    double worst = 0.0;
    int rejected = 0;
    std::vector<double> xs(kKsSamples);
    for (int k = 0; k < 50; ++k) {
        Instance1d const in = random_1d(rng);
        tp::TruncNormal1d const t({in.mu, in.sigma}, in.lo, in.hi);
        for (auto& x : xs) x = t.sample(rng);
        double const stat = tp::ks_statistic(xs, [&](double x) { return t.cdf(x); });
        worst = std::max(worst, stat);
        rejected += stat >= crit ? 1 : 0;
    }
    std::ostringstream s;
    s << "50 instances, n=" << kKsSamples << ", max KS " << worst << " vs critical " << crit << ", "
      << rejected << " rejected; calibration: P(at least " << rejected
      << " of 50 rejected | exact sampler) = " << binomial_tail(50, rejected, 0.01)
      << ", P(any rejected | exact sampler) = " << binomial_tail(50, 1, 0.01);
    return {rejected == 0, s.str()};
}

// ---------------------------------------------------------------- 8
Verdict gradients(std::uint64_t seed) {
    Rng rng(Rng::derive(seed, 8));
    double worst1 = 0.0, worst_mv = 0.0;
    for (int k = 0; k < 100; ++k) {
        Instance1d const in = random_1d(rng);
        tp::TruncNormal1d const t({in.mu, in.sigma}, in.lo, in.hi);
        double const x = t.sample(rng);
        auto f = [&](double mu, double sigma) { return tp::TruncNormal1d({mu, sigma}, in.lo, in.hi).log_pdf(x); };
        double const h = 1e-5;
        auto const [gm, gs] = t.grad_log_pdf(x);
        worst1 = std::max(worst1, rel_err(gm, (f(in.mu + h, in.sigma) - f(in.mu - h, in.sigma)) / (2 * h)));
        worst1 = std::max(worst1, rel_err(gs, (f(in.mu, in.sigma + h) - f(in.mu, in.sigma - h)) / (2 * h)));
    }
    int done = 0;
    while (done < 100) {
        int const d = static_cast<int>(rng.integer(2, 4));
        tp::DatasetInstance const inst = tp::random_instance(d, rng);
        auto const mode = static_cast<tp::ApproxMode>(done % 3);
        tp::PolytopeTrunc const t(inst.base(), inst.polytope, mode);
        if (t.low_mass_fallback()) continue;
        Vec const a = tp::chebyshev_center(inst.polytope).center;
        auto f = [&](Vec const& mu, Vec const& sigma) {
            return tp::PolytopeTrunc(tp::DiagGaussian(mu, sigma), inst.polytope, t.inner(), t.outer(), mode)
                .log_prob(a);
        };
        auto const g = t.grad_log_prob(a);
        double const h = 1e-6;
        for (int i = 0; i < d; ++i) {
            Vec e = Vec::Zero(d);
            e[i] = h;
            worst_mv = std::max(worst_mv, rel_err(g.d_mu[i], (f(inst.mu + e, inst.sigma) - f(inst.mu - e, inst.sigma)) / (2 * h)));
            worst_mv = std::max(worst_mv, rel_err(g.d_sigma[i], (f(inst.mu, inst.sigma + e) - f(inst.mu, inst.sigma - e)) / (2 * h)));
        }
        ++done;
    }
    std::ostringstream s;
    s << "max relative error: 1-d " << worst1 << ", polytope (frozen boxes) " << worst_mv << " (limit "
      << kGradRelTol << ")";
    return {worst1 <= kGradRelTol && worst_mv <= kGradRelTol, s.str()};
}

// ---------------------------------------------------------------- 9
Verdict mode_qp(std::uint64_t seed) {
    Rng rng(Rng::derive(seed, 9));
    double worst_clamp = 0.0;
    for (int k = 0; k < 100; ++k) {
        int const d = static_cast<int>(rng.integer(1, 6));
        Vec lo(d), hi(d), mu(d), sigma(d);
        for (int i = 0; i < d; ++i) {
            lo[i] = rng.uniform(-2, 0);
            hi[i] = lo[i] + rng.uniform(0.1, 2);
            mu[i] = rng.uniform(-3, 3);
            sigma[i] = rng.uniform(0.1, 2);
        }
        tp::Interval const b(lo, hi);
        Vec const qp = tp::solve_mode_qp({sigma.cwiseAbs2().cwiseInverse(), mu, tp::HPolytope::from_interval(b)});
        worst_clamp = std::max(worst_clamp, (qp - tp::clamp_to(b, mu)).cwiseAbs().maxCoeff());
    }
    int beaten = 0;
    double worst_margin = -1e300;
    for (int k = 0; k < 100; ++k) {
        int const d = static_cast<int>(rng.integer(2, 6));
        tp::DatasetInstance const inst = tp::random_instance(d, rng);
        tp::DiagGaussian const g = inst.base();
        Vec const m = tp::PolytopeTrunc(g, inst.polytope, tp::ApproxMode::Original).mode_point();
        double const best = g.log_pdf(m);
        tp::Interval const o = tp::outer_interval(inst.polytope);
        Vec x(d);
        int found = 0;
        while (found < kModePoints) {
            for (int i = 0; i < d; ++i) x[i] = rng.uniform(o.lower()[i], o.upper()[i]);
            if (!tp::contains(inst.polytope, x)) continue;
            ++found;
            double const v = g.log_pdf(x);
            worst_margin = std::max(worst_margin, v - best);
            beaten += v > best ? 1 : 0;
        }
    }
    std::ostringstream s;
    s << "clamp: max deviation " << worst_clamp << " (limit " << kClampTol << "); polytopes: " << beaten
      << " of 1e6 random feasible points beat the mode, best margin " << worst_margin;
    return {worst_clamp <= kClampTol && beaten == 0, s.str()};
}

// ---------------------------------------------------------------- 10
Verdict safety(std::uint64_t seed) {
    std::ostringstream s;
    bool ok = true;
    enum class Draw { Inverse, Rejection, Rdhr, Hybrid };
    char const* names[] = {"inverse-transform", "rejection", "rdhr", "hybrid"};
    for (int dim : {2, 3}) {
        tp::SeekerConfig const cfg = dim == 2 ? tp::SeekerConfig::default_2d() : tp::SeekerConfig::default_3d();
        for (Draw which : {Draw::Inverse, Draw::Rejection, Draw::Rdhr, Draw::Hybrid}) {
            Rng rng(Rng::derive(seed, 100 + 10 * dim + static_cast<int>(which)));
            tp::SeekerEnv env(cfg);
            int violations = 0;
            for (int t = 0; t < kSafetySteps; ++t) {
                tp::HPolytope const p = env.feasible_set();
                // Mean pulled toward the goal so episodes reach walls and obstacles.
                Vec const mean = 0.8 * (cfg.goal.center - env.state()).normalized() + 0.3 * rng.normal_vec(dim);
                tp::DiagGaussian const g(mean, Vec::Constant(dim, 0.6));
                Vec a;
                switch (which) {
                    case Draw::Inverse: {
                        tp::Interval const box = tp::inner_interval(p);
                        try {
                            a = tp::FactorizedTrunc(g, box).sample(rng);
                        } catch (tp::UnderflowError const&) {
                            a = tp::clamp_to(box, g.mean);
                        }
                        break;
                    }
                    case Draw::Rejection: {
                        auto r = tp::rejection_sample(g, p, tp::kRejectionSafetyCap, rng);
                        a = r.draw ? r.draw->value : tp::rdhr_sample(g, p, {}, rng).value;
                        break;
                    }
                    case Draw::Rdhr: a = tp::rdhr_sample(g, p, {}, rng).value; break;
                    case Draw::Hybrid: a = tp::hybrid_sample(g, p, kHybridM, {}, rng).value; break;
                }
                tp::StepResult const r = env.step(a);
                violations += tp::seeker_collides(cfg, r.next_state) ? 1 : 0;
                if (r.done) env.reset();
            }
            ok = ok && violations == 0;
            s << "seeker-" << dim << "d " << names[static_cast<int>(which)] << ": " << violations << "; ";
        }
    }
    tp::QuadrotorConfig const qc = tp::QuadrotorConfig::load(tp::default_quadrotor_config_path());
    for (Draw which : {Draw::Rejection, Draw::Hybrid}) {
        Rng rng(Rng::derive(seed, 200 + static_cast<int>(which)));
        tp::QuadrotorEnv env(qc);
        env.reset(rng);
        tp::DiagGaussian const g(qc.action_box.center(), qc.action_box.half_widths());
        int outside = 0;
        for (int t = 0; t < kSafetySteps; ++t) {
            tp::HPolytope const p = env.feasible_set();
            Vec const a = which == Draw::Hybrid ? tp::hybrid_sample(g, p, kHybridM, {}, rng).value
                                                : tp::rejection_sample(g, p, tp::kRejectionSafetyCap, rng).draw->value;
            tp::StepResult const r = env.step(a, rng);
            outside += tp::contains(qc.Sr, r.next_state, 1e-9) ? 0 : 1;
            if (r.done) env.reset(rng);
        }
        ok = ok && outside == 0;
        s << "quadrotor " << names[static_cast<int>(which)] << ": " << outside << " states outside S^r; ";
    }
    return {ok, s.str() + "(violations per 1e4 steps)"};
}

// ---------------------------------------------------------------- 11
Verdict rl_direction(std::uint64_t seed, std::string const& out_dir) {
    tp::TrainConfig cfg;
    cfg.episodes = kRlEpisodes;
    cfg.seed = seed;
    auto const sums = tp::train_demo({tp::MetricMode::ExactInt, tp::MetricMode::OgInt}, kRlSeeds, cfg, out_dir);
    tp::DemoSummary const& ex = sums[0];
    tp::DemoSummary const& og = sums[1];
    double const diff = ex.mean_final - og.mean_final;
    double const se = std::hypot(ex.std_error, og.std_error);
    double const lower = diff - kOneSidedZ95 * se;
    std::ostringstream s;
    s.precision(4);
    s << kRlSeeds << " seeds x " << kRlEpisodes << " episodes: exact-int " << ex.mean_final << " +- "
      << ex.std_error << ", og-int " << og.mean_final << " +- " << og.std_error << "; difference " << diff
      << ", one-sided 95% lower bound " << lower;
    return {lower > 0, s.str()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string work = "acceptance_work";
    std::uint64_t seed = 0;
    std::int64_t oracle = 200000;
    int per_dim = 1000;
    app.add_option("--work-dir", work)->capture_default_str();
    app.add_option("--seed", seed)->capture_default_str();
    app.add_option("--oracle-samples", oracle, "Monte Carlo draws per dataset instance")->capture_default_str();
    app.add_option("--per-dim", per_dim)->capture_default_str();
    CLI11_PARSE(app, argc, argv);
    std::filesystem::create_directories(work);

    std::printf("acceptance: seed %llu, %d instances per dimension, oracle n = %lld\n",
                static_cast<unsigned long long>(seed), per_dim, static_cast<long long>(oracle));
    auto const t0 = std::chrono::steady_clock::now();
    tp::DatasetOptions dopts;
    dopts.per_dim = per_dim;
    dopts.seed = seed;
    dopts.oracle_samples_low = dopts.oracle_samples_high = oracle;
    tp::Dataset const ds = tp::generate_dataset(dopts);
    tp::write_dataset(work + "/dataset.jsonl", ds);
    std::printf("dataset: %zu instances in %.0fs\n", ds.instances.size(),
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    tp::VerifyOptions vopts;
    vopts.seed = seed;

    run(1, "combined normalizing-constant error ordering", [&] { return integral_ordering(ds, work + "/integral.csv"); });
    run(2, "hybrid / rejection / RDHR sampling time", [&] { return sampling_times(ds, seed, work + "/sampling.csv"); });
    run(3, "union mixture equals direct truncated density", [&] { return property(tp::check_union_mixture(vopts)); });
    run(4, "union entropy within 3 Monte Carlo standard errors", [&] { return z_property(tp::check_union_entropy(vopts), vopts.entropy_unions); });
    run(5, "reparameterized sampling moments and reconstruction", [&] {
        // d means plus d(d+1)/2 covariance entries per polytope, d = 2 and 3.
        int const tests = vopts.reparam_polytopes_per_dim * (2 + 3 + 3 + 6);
        return z_property(tp::check_reparam_moments(vopts), tests);
    });
    run(6, "truncated-normal entropy against quadrature", [&] { return entropy_quadrature(seed); });
    run(7, "inverse-transform sampler KS test", [&] { return ks_inverse_transform(seed); });
    run(8, "analytic gradients against central differences", [&] { return gradients(seed); });
    run(9, "mode QP: clamping on boxes, optimality on polytopes", [&] { return mode_qp(seed); });
    run(10, "safety of truncated-policy rollouts", [&] { return safety(seed); });
    run(11, "exact-int beats og-int on Seeker-2D", [&] { return rl_direction(seed, work + "/rl"); });

    std::printf("%d of 11 criteria failed (%.0fs total)\n", failures,
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return failures == 0 ? 0 : 1;
}
