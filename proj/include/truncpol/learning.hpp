#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "truncpol/envs.hpp"
#include "truncpol/samplers.hpp"
#include "truncpol/truncmvn.hpp"

namespace truncpol {

enum class MetricMode { ExactInt, OgInt, ApproxPolyOuter, ApproxPolyInner, ApproxPolyCombined, OgPoly };
enum class Baseline { None, MeanReturn };

char const* to_string(MetricMode mode);
/// Accepts the CLI spellings: exact-int, og-int, approx-poly-outer,
/// approx-poly-inner, approx-poly-combined, og-poly.
MetricMode parse_metric_mode(std::string const& name);
bool is_interval_mode(MetricMode mode);

/// Gaussian policy with mean W_mu f + b_mu and state-independent stddev.
struct LinearGaussianPolicy {
    static constexpr double kMinLogSigma = -6.9077552789821368;  // log(1e-3)
    static constexpr double kMaxLogSigma = 4.6051701859880914;   // log(1e2)

    Mat W_mu;
    Vec b_mu;
    Vec log_sigma;

    LinearGaussianPolicy() = default;
    LinearGaussianPolicy(Eigen::Index action_dim, Eigen::Index feature_dim);

    Vec mean(Vec const& features) const;
    Vec stddev() const;
    DiagGaussian distribution(Vec const& features) const;
    void clip();
    bool finite() const;
    Eigen::Index parameter_count() const;
    /// Flattened (W_mu column-major, b_mu, log_sigma).
    Vec flatten() const;
    void assign(Vec const& flat);
};

/// (state, goal - state) scaled by the workspace half width.
Vec seeker_features(SeekerConfig const& cfg, Vec const& state);

struct TrainConfig {
    MetricMode metric_mode = MetricMode::ExactInt;
    int episodes = 300;
    double learning_rate = 0.01;
    double discount = 0.9;
    std::uint64_t seed = 0;
    Baseline baseline = Baseline::MeanReturn;
    /// Rescales the gradient to this norm when larger; nonpositive disables.
    double grad_clip = 0.0;
    std::int64_t rejection_limit = kDefaultRejectionLimit;
    RdhrConfig rdhr;
    SeekerConfig env = SeekerConfig::default_2d();

    void validate() const;
};

/// Where an action was drawn from, enough to re-evaluate its log-prob.
struct Transition {
    Vec features;
    Vec action;
    double reward = 0.0;
    /// Interval modes: the box actions were drawn from.
    Interval box;
    /// Polytope modes: the feasible polytope and its frozen boxes.
    HPolytope poly;
    Interval inner;
    Interval outer;
    /// True when the truncation mass underflowed and the action fell back to
    /// the mode; such steps carry no gradient.
    bool degenerate = false;
};

using Trajectory = std::vector<Transition>;

/// Interval modes: inner_interval(poly). Polytope modes: the polytope itself.
ConstraintSet feasible_action_interval(HPolytope const& poly, MetricMode mode);

/// d log pi(a) / d(mu, sigma) under the metric of `mode`.
FactorizedTrunc::Gradient step_score(DiagGaussian const& dist, Transition const& step,
                                     MetricMode mode);

/// Discounted returns-to-go.
std::vector<double> discounted_returns(Trajectory const& traj, double discount);

/// Monte Carlo policy gradient of the surrogate sum_t log pi(a_t) (G_t - baseline) / T,
/// flattened like LinearGaussianPolicy::flatten(). The baseline must not
/// depend on this trajectory.
Vec policy_gradient(LinearGaussianPolicy const& policy, Trajectory const& traj,
                    TrainConfig const& cfg, double baseline = 0.0);

LinearGaussianPolicy reinforce_update(LinearGaussianPolicy const& policy, Trajectory const& traj,
                                      TrainConfig const& cfg, double baseline = 0.0);

/// Mean discounted return over the steps of a trajectory.
double mean_return(Trajectory const& traj, double discount);

struct EpisodeStats {
    double total_return = 0.0;
    int steps = 0;
    double mean_entropy = 0.0;
    double mean_log_prob = 0.0;
    int degenerate_steps = 0;
    bool reached_goal = false;
};

/// Rolls out one episode, drawing actions from the truncated policy.
/// Throws InvariantViolation if an executed action leaves its feasible set.
Trajectory run_episode(LinearGaussianPolicy const& policy, TrainConfig const& cfg, Rng& rng,
                       EpisodeStats* stats = nullptr);

struct TrainResult {
    std::vector<EpisodeStats> episodes;
    LinearGaussianPolicy policy;

    std::vector<double> returns() const;
};

TrainResult train(TrainConfig const& cfg);

/// Final-window return of one run: mean over its last min(100, episodes) episodes.
double final_return(TrainResult const& run);

struct DemoSummary {
    MetricMode mode = MetricMode::ExactInt;
    int seeds = 0;
    int episodes = 0;
    std::vector<double> per_seed_final;
    double mean_final = 0.0;
    /// Standard error of mean_final across seeds.
    double std_error = 0.0;
    /// Normal-approximation 95% interval half width.
    double ci95 = 0.0;
};

/// Runs `seeds` training runs (seed = base.seed + k) per mode, writes
/// curves_<mode>.csv and summary.csv into out_dir, and returns the summaries.
std::vector<DemoSummary> train_demo(std::vector<MetricMode> const& modes, int seeds,
                                    TrainConfig const& base, std::string const& out_dir);

}  // namespace truncpol
