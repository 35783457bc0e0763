#include "truncpol/learning.hpp"

#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>

#include "truncpol/csv.hpp"
#include "truncpol/errors.hpp"
#include "truncpol/parallel.hpp"
#include "truncpol/stats.hpp"
#include "truncpol/solvers.hpp"

namespace truncpol {

char const* to_string(MetricMode mode) {
    switch (mode) {
        case MetricMode::ExactInt: return "exact-int";
        case MetricMode::OgInt: return "og-int";
        case MetricMode::ApproxPolyOuter: return "approx-poly-outer";
        case MetricMode::ApproxPolyInner: return "approx-poly-inner";
        case MetricMode::ApproxPolyCombined: return "approx-poly-combined";
        case MetricMode::OgPoly: return "og-poly";
    }
    return "?";
}

MetricMode parse_metric_mode(std::string const& name) {
    for (auto m : {MetricMode::ExactInt, MetricMode::OgInt, MetricMode::ApproxPolyOuter,
                   MetricMode::ApproxPolyInner, MetricMode::ApproxPolyCombined, MetricMode::OgPoly})
        if (name == to_string(m)) return m;
    throw ArgumentError("unknown metric mode '" + name + "'");
}

bool is_interval_mode(MetricMode mode) {
    return mode == MetricMode::ExactInt || mode == MetricMode::OgInt;
}

namespace {

constexpr double kBaselineDecay = 0.9;

ApproxMode approx_of(MetricMode mode) {
    switch (mode) {
        case MetricMode::ApproxPolyOuter: return ApproxMode::Outer;
        case MetricMode::ApproxPolyInner: return ApproxMode::Inner;
        case MetricMode::ApproxPolyCombined: return ApproxMode::Combined;
        default: return ApproxMode::Original;
    }
}

FactorizedTrunc::Gradient gaussian_score(DiagGaussian const& dist, Vec const& a) {
    FactorizedTrunc::Gradient g;
    dist.score(a, g.d_mu, g.d_sigma);
    return g;
}

}  // namespace

LinearGaussianPolicy::LinearGaussianPolicy(Eigen::Index action_dim, Eigen::Index feature_dim)
    : W_mu(Mat::Zero(action_dim, feature_dim)),
      b_mu(Vec::Zero(action_dim)),
      log_sigma(Vec::Zero(action_dim)) {}

Vec LinearGaussianPolicy::mean(Vec const& features) const { return W_mu * features + b_mu; }

Vec LinearGaussianPolicy::stddev() const {
    return log_sigma.array().max(kMinLogSigma).min(kMaxLogSigma).exp();
}

DiagGaussian LinearGaussianPolicy::distribution(Vec const& features) const {
    return DiagGaussian(mean(features), stddev());
}

void LinearGaussianPolicy::clip() { log_sigma = log_sigma.array().max(kMinLogSigma).min(kMaxLogSigma); }

bool LinearGaussianPolicy::finite() const {
    return W_mu.allFinite() && b_mu.allFinite() && log_sigma.allFinite();
}

Eigen::Index LinearGaussianPolicy::parameter_count() const {
    return W_mu.size() + b_mu.size() + log_sigma.size();
}

Vec LinearGaussianPolicy::flatten() const {
    Vec flat(parameter_count());
    flat << Eigen::Map<Vec const>(W_mu.data(), W_mu.size()), b_mu, log_sigma;
    return flat;
}

void LinearGaussianPolicy::assign(Vec const& flat) {
    if (flat.size() != parameter_count()) throw ArgumentError("LinearGaussianPolicy: size mismatch");
    Eigen::Map<Vec>(W_mu.data(), W_mu.size()) = flat.head(W_mu.size());
    b_mu = flat.segment(W_mu.size(), b_mu.size());
    log_sigma = flat.tail(log_sigma.size());
}

Vec seeker_features(SeekerConfig const& cfg, Vec const& state) {
    Vec f(2 * state.size());
    f << state, cfg.goal.center - state;
    return f / cfg.bounds_half_width;
}

void TrainConfig::validate() const {
    if (episodes < 0) throw ArgumentError("TrainConfig: episodes must be >= 0");
    if (!(learning_rate > 0)) throw ArgumentError("TrainConfig: learning_rate must be > 0");
    if (!(discount > 0 && discount <= 1)) throw ArgumentError("TrainConfig: discount must be in (0, 1]");
    if (rejection_limit < 1) throw ArgumentError("TrainConfig: rejection_limit must be >= 1");
    env.validate();
}

ConstraintSet feasible_action_interval(HPolytope const& poly, MetricMode mode) {
    if (is_interval_mode(mode)) return inner_interval(poly);
    chebyshev_center(poly);  // rejects empty or flat polytopes
    return poly;
}

FactorizedTrunc::Gradient step_score(DiagGaussian const& dist, Transition const& step,
                                     MetricMode mode) {
    switch (mode) {
        case MetricMode::ExactInt: return FactorizedTrunc(dist, step.box).grad_log_prob(step.action);
        case MetricMode::OgInt:
        case MetricMode::OgPoly: return gaussian_score(dist, step.action);
        default: {
            PolytopeTrunc const pt(dist, step.poly, step.inner, step.outer, approx_of(mode));
            auto g = pt.grad_log_prob(step.action);
            return {g.d_mu, g.d_sigma};
        }
    }
}

std::vector<double> discounted_returns(Trajectory const& traj, double discount) {
    std::vector<double> g(traj.size());
    double acc = 0.0;
    for (std::size_t k = traj.size(); k-- > 0;) {
        acc = traj[k].reward + discount * acc;
        g[k] = acc;
    }
    return g;
}

double mean_return(Trajectory const& traj, double discount) {
    if (traj.empty()) throw PreconditionError("mean_return: empty trajectory");
    std::vector<double> const returns = discounted_returns(traj, discount);
    return std::accumulate(returns.begin(), returns.end(), 0.0) / static_cast<double>(returns.size());
}

Vec policy_gradient(LinearGaussianPolicy const& policy, Trajectory const& traj,
                    TrainConfig const& cfg, double baseline) {
    if (traj.empty()) throw PreconditionError("policy_gradient: empty trajectory");
    std::vector<double> const returns = discounted_returns(traj, cfg.discount);
    Mat dW = Mat::Zero(policy.W_mu.rows(), policy.W_mu.cols());
    Vec db = Vec::Zero(policy.b_mu.size());
    Vec dls = Vec::Zero(policy.log_sigma.size());
    Vec const sigma = policy.stddev();
    for (std::size_t t = 0; t < traj.size(); ++t) {
        auto const& step = traj[t];
        if (step.degenerate) continue;
        double const adv = returns[t] - baseline;
        if (adv == 0.0) continue;
        auto const score = step_score(policy.distribution(step.features), step, cfg.metric_mode);
        dW += adv * score.d_mu * step.features.transpose();
        db += adv * score.d_mu;
        dls += adv * score.d_sigma.cwiseProduct(sigma);
    }
    LinearGaussianPolicy g = policy;
    g.W_mu = dW;
    g.b_mu = db;
    g.log_sigma = dls;
    Vec flat = g.flatten() / static_cast<double>(traj.size());
    if (!flat.allFinite()) {
        std::ostringstream msg;
        msg << "policy_gradient: non-finite gradient (trajectory length " << traj.size()
            << ", sigma " << sigma.transpose() << ", mu at t=0 "
            << policy.mean(traj.front().features).transpose() << ")";
        throw NumericError(msg.str(), std::numeric_limits<double>::infinity());
    }
    return flat;
}

LinearGaussianPolicy reinforce_update(LinearGaussianPolicy const& policy, Trajectory const& traj,
                                      TrainConfig const& cfg, double baseline) {
    Vec grad = policy_gradient(policy, traj, cfg, baseline);
    double const norm = grad.norm();
    if (cfg.grad_clip > 0 && norm > cfg.grad_clip) grad *= cfg.grad_clip / norm;
    LinearGaussianPolicy next = policy;
    next.assign(policy.flatten() + cfg.learning_rate * grad);
    next.clip();
    return next;
}

Trajectory run_episode(LinearGaussianPolicy const& policy, TrainConfig const& cfg, Rng& rng,
                       EpisodeStats* stats) {
    SeekerEnv env(cfg.env);
    Trajectory traj;
    EpisodeStats local;
    bool const interval = is_interval_mode(cfg.metric_mode);
    double entropy_sum = 0.0, logp_sum = 0.0;
    int scored = 0;
    while (true) {
        HPolytope const poly = env.feasible_set();
        Transition step;
        step.features = seeker_features(cfg.env, env.state());
        DiagGaussian const dist = policy.distribution(step.features);
        if (interval) {
            step.box = inner_interval(poly);
            try {
                FactorizedTrunc const ft(dist, step.box);
                step.action = ft.sample(rng);
                entropy_sum += ft.entropy();
                logp_sum += cfg.metric_mode == MetricMode::ExactInt ? ft.log_prob(step.action)
                                                                    : dist.log_pdf(step.action);
                ++scored;
            } catch (UnderflowError const&) {
                step.action = clamp_to(step.box, dist.mean);
                step.degenerate = true;
            }
        } else {
            step.poly = poly;
            step.inner = inner_interval(poly);
            step.outer = outer_interval(poly);
            step.action = hybrid_sample(dist, poly, cfg.rejection_limit, cfg.rdhr, rng).value;
            try {
                if (cfg.metric_mode == MetricMode::OgPoly) {
                    entropy_sum += 0.5 * static_cast<double>(dist.dim()) * std::log(2 * M_PI * M_E) +
                                   dist.stddev.array().log().sum();
                    logp_sum += dist.log_pdf(step.action);
                } else {
                    PolytopeTrunc const pt(dist, poly, step.inner, step.outer, approx_of(cfg.metric_mode));
                    entropy_sum += pt.approx_entropy();
                    logp_sum += pt.log_prob(step.action);
                }
                ++scored;
            } catch (LowMassError const&) {
                step.degenerate = true;
            }
        }
        if (!contains(poly, step.action, kContainmentSlack))
            throw InvariantViolation("run_episode: executed action outside its feasible set");
        StepResult const r = env.step(step.action);
        if (r.info.collision)
            throw InvariantViolation("run_episode: feasible action produced a collision");
        step.reward = r.reward;
        local.total_return += r.reward;
        local.degenerate_steps += step.degenerate ? 1 : 0;
        local.reached_goal = local.reached_goal || r.info.goal_reached;
        traj.push_back(std::move(step));
        if (r.done) break;
    }
    local.steps = static_cast<int>(traj.size());
    if (scored > 0) {
        local.mean_entropy = entropy_sum / scored;
        local.mean_log_prob = logp_sum / scored;
    }
    if (stats) *stats = local;
    return traj;
}

std::vector<double> TrainResult::returns() const {
    std::vector<double> out;
    out.reserve(episodes.size());
    for (auto const& e : episodes) out.push_back(e.total_return);
    return out;
}

TrainResult train(TrainConfig const& cfg) {
    cfg.validate();
    TrainResult result;
    result.policy = LinearGaussianPolicy(cfg.env.dim, 2 * cfg.env.dim);
    Rng rng(cfg.seed);
    // Moving average over earlier episodes only, so it is independent of the
    // actions it is subtracted from.
    double baseline = 0.0;
    for (int e = 0; e < cfg.episodes; ++e) {
        EpisodeStats stats;
        Trajectory const traj = run_episode(result.policy, cfg, rng, &stats);
        double const b = cfg.baseline == Baseline::MeanReturn ? baseline : 0.0;
        result.policy = reinforce_update(result.policy, traj, cfg, b);
        double const m = mean_return(traj, cfg.discount);
        baseline = e == 0 ? m : kBaselineDecay * baseline + (1.0 - kBaselineDecay) * m;
        if (!result.policy.finite())
            throw NumericError("train: parameters became non-finite at episode " + std::to_string(e),
                               std::numeric_limits<double>::infinity());
        result.episodes.push_back(stats);
    }
    return result;
}

double final_return(TrainResult const& run) {
    if (run.episodes.empty()) throw ArgumentError("final_return: no episodes");
    std::size_t const window = std::min<std::size_t>(100, run.episodes.size());
    double sum = 0.0;
    for (std::size_t k = run.episodes.size() - window; k < run.episodes.size(); ++k)
        sum += run.episodes[k].total_return;
    return sum / static_cast<double>(window);
}

std::vector<DemoSummary> train_demo(std::vector<MetricMode> const& modes, int seeds,
                                    TrainConfig const& base, std::string const& out_dir) {
    if (seeds < 1) throw ArgumentError("train-demo: seeds must be >= 1");
    if (base.episodes < 1) throw ArgumentError("train-demo: episodes must be >= 1");
    std::filesystem::create_directories(out_dir);
    std::vector<DemoSummary> summaries;
    for (MetricMode mode : modes) {
        std::vector<TrainResult> runs(static_cast<std::size_t>(seeds));
        parallel_for(runs.size(), [&](std::size_t k) {
            TrainConfig cfg = base;
            cfg.metric_mode = mode;
            cfg.seed = base.seed + k;
            runs[k] = train(cfg);
        });
        CsvWriter curves(out_dir + "/curves_" + to_string(mode) + ".csv");
        curves.header({"seed", "episode", "return", "mode", "steps", "mean_entropy", "mean_log_prob",
                       "degenerate_steps"});
        DemoSummary s;
        s.mode = mode;
        s.seeds = seeds;
        s.episodes = base.episodes;
        for (std::size_t k = 0; k < runs.size(); ++k) {
            for (std::size_t e = 0; e < runs[k].episodes.size(); ++e) {
                auto const& st = runs[k].episodes[e];
                curves.row({std::to_string(base.seed + k), std::to_string(e), format_real(st.total_return),
                            to_string(mode), std::to_string(st.steps), format_real(st.mean_entropy),
                            format_real(st.mean_log_prob), std::to_string(st.degenerate_steps)});
            }
            s.per_seed_final.push_back(final_return(runs[k]));
        }
        s.mean_final = mean_of(s.per_seed_final);
        s.std_error = seeds > 1 ? stddev_of(s.per_seed_final) / std::sqrt(static_cast<double>(seeds)) : 0.0;
        s.ci95 = 1.959963984540054 * s.std_error;
        summaries.push_back(std::move(s));
    }
    CsvWriter summary(out_dir + "/summary.csv");
    summary.header({"mode", "seeds", "episodes", "mean_final_return", "std_error", "ci95_low", "ci95_high"});
    for (auto const& s : summaries)
        summary.row({to_string(s.mode), std::to_string(s.seeds), std::to_string(s.episodes),
                     format_real(s.mean_final), format_real(s.std_error), format_real(s.mean_final - s.ci95),
                     format_real(s.mean_final + s.ci95)});
    return summaries;
}

}  // namespace truncpol
