#pragma once

#include <string>
#include <vector>

#include "truncpol/geometry.hpp"
#include "truncpol/rng.hpp"
#include "truncpol/serialization.hpp"

namespace truncpol {

struct Ball {
    Vec center;
    double radius = 0.0;
};

struct StepInfo {
    bool goal_reached = false;
    bool collision = false;
    bool truncated = false;
};

struct StepResult {
    Vec next_state;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

// ---------------------------------------------------------------- Seeker

struct SeekerConfig {
    int dim = 2;
    double bounds_half_width = 10.0;
    std::vector<Ball> obstacles;
    Ball goal;
    Interval action_box;
    int max_steps = 100;
    Vec start;

    void validate() const;

    /// Three obstacles placed off the start-goal diagonal.
    static SeekerConfig default_2d();
    static SeekerConfig default_3d();
    static SeekerConfig from_json(Json const& j);
    Json to_json() const;
};

/// Actions keeping s + a inside the bounds and on the free side of every
/// obstacle's tangent halfspace, intersected with the action box.
HPolytope seeker_feasible_set(SeekerConfig const& cfg, Vec const& state);

/// One transition s' = s + a. `steps_taken` counts earlier steps of the episode.
StepResult seeker_step(SeekerConfig const& cfg, Vec const& state, Vec const& action,
                       int steps_taken = 0);

bool seeker_collides(SeekerConfig const& cfg, Vec const& state);

class SeekerEnv {
  public:
    explicit SeekerEnv(SeekerConfig cfg);
    SeekerConfig const& config() const { return cfg_; }
    Vec const& reset();
    Vec const& state() const { return state_; }
    int steps() const { return steps_; }
    HPolytope feasible_set() const { return seeker_feasible_set(cfg_, state_); }
    StepResult step(Vec const& action);

  private:
    SeekerConfig cfg_;
    Vec state_;
    int steps_ = 0;
};

// ------------------------------------------------------------- Quadrotor

struct QuadrotorConfig {
    Mat A;
    Mat B;
    Zonotope W;
    Zonotope Sr;
    HPolytope action_polytope;
    /// Bounding box of the action polytope; gives a_min and a_range.
    Interval action_box;
    Vec goal_state;
    int max_steps = 200;
    /// Episodes start at center + G beta with beta uniform on [-f, f].
    double start_fraction = 0.5;

    void validate() const;
    static QuadrotorConfig from_json(Json const& j);
    static QuadrotorConfig load(std::string const& path);
};

/// Path of the config shipped with the source tree.
std::string default_quadrotor_config_path();

/// Actions a with l^T(A s + B a) <= rho_Sr(l) - rho_W(l) for l over +-columns
/// of [G_W, G_S], stacked with the action polytope.
HPolytope quadrotor_feasible_set(QuadrotorConfig const& cfg, Vec const& state);

double quadrotor_reward(QuadrotorConfig const& cfg, Vec const& state, Vec const& action);

StepResult quadrotor_step(QuadrotorConfig const& cfg, Vec const& state, Vec const& action,
                          Rng& rng, int steps_taken = 0);

class QuadrotorEnv {
  public:
    explicit QuadrotorEnv(QuadrotorConfig cfg);
    QuadrotorConfig const& config() const { return cfg_; }
    Vec const& reset(Rng& rng);
    Vec const& state() const { return state_; }
    int steps() const { return steps_; }
    HPolytope feasible_set() const { return quadrotor_feasible_set(cfg_, state_); }
    StepResult step(Vec const& action, Rng& rng);

  private:
    QuadrotorConfig cfg_;
    Vec state_;
    int steps_ = 0;
};

// ---------------------------------------------------------------- traces

struct TraceRow {
    int step = 0;
    Vec state;
    Vec action;
    double reward = 0.0;
    bool done = false;
};

void write_trace(std::string const& path, std::vector<TraceRow> const& rows);

}  // namespace truncpol
