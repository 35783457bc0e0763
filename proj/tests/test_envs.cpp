#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "truncpol/envs.hpp"
#include "truncpol/samplers.hpp"

using namespace truncpol;
using fixtures::vec;

TEST_CASE("seeker feasible set") {
    SeekerConfig const cfg = SeekerConfig::default_2d();
    HPolytope const p = seeker_feasible_set(cfg, cfg.start);
    CHECK(p.rows() == 4 * 2 + 3);
    CHECK(contains(p, Vec::Zero(2)));
    // Start is 2 from the lower-left wall: the action box is the binding set.
    CHECK(contains(p, vec({-1, -1})));

    // Next to an obstacle, moving into it is infeasible.
    Vec const near = vec({-4.0, 1.6});
    HPolytope const q = seeker_feasible_set(cfg, near);
    CHECK(contains(q, Vec::Zero(2)));
    CHECK(!contains(q, vec({0, -0.5})));
    CHECK(contains(q, vec({0, 0.5})));

    CHECK_THROWS_AS(seeker_feasible_set(cfg, vec({-4.0, 0.0})), InvalidStateError);
    CHECK_THROWS_AS(seeker_feasible_set(cfg, vec({11.0, 0.0})), InvalidStateError);
}

TEST_CASE("seeker rewards") {
    SeekerConfig const cfg = SeekerConfig::default_2d();
    StepResult const goal = seeker_step(cfg, vec({6.5, 6.5}), vec({0.5, 0.5}));
    CHECK(goal.reward == 100.0);
    CHECK(goal.done);
    CHECK(goal.info.goal_reached);

    StepResult const crash = seeker_step(cfg, vec({-4.0, 2.0}), vec({0.0, -1.0}));
    CHECK(crash.reward == -100.0);
    CHECK(crash.info.collision);

    // Straight toward the goal: progress equals the step length.
    Vec const s = vec({0.0, 0.0});
    Vec const a = 0.5 * (cfg.goal.center - s).normalized();
    StepResult const r = seeker_step(cfg, s, a);
    CHECK(r.reward == doctest::Approx(a.norm() - 1.0).epsilon(1e-12));
    CHECK(!r.done);

    CHECK(seeker_step(cfg, s, a, cfg.max_steps - 1).info.truncated);
}

TEST_CASE("seeker rollouts under truncated sampling never violate constraints") {
    for (SeekerConfig const& cfg : {SeekerConfig::default_2d(), SeekerConfig::default_3d()}) {
        SeekerEnv env(cfg);
        Rng rng(1);
        DiagGaussian const g(Vec::Zero(cfg.dim), Vec::Constant(cfg.dim, 1.5));
        int violations = 0;
        for (int t = 0; t < 2000; ++t) {
            HPolytope const p = env.feasible_set();
            Vec const a = hybrid_sample(g, p, 20, {}, rng).value;
            StepResult const r = env.step(a);
            violations += r.info.collision ? 1 : 0;
            if (r.done) env.reset();
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("shipped quadrotor config") {
    QuadrotorConfig const cfg = QuadrotorConfig::load(default_quadrotor_config_path());
    CHECK(cfg.A.rows() == 6);
    CHECK(cfg.B.cols() == 2);
    Vec const a_min = cfg.action_box.lower();
    CHECK(quadrotor_reward(cfg, cfg.goal_state, a_min) == 0.0);
    double const d = static_cast<double>(cfg.B.cols());
    CHECK(quadrotor_reward(cfg, cfg.goal_state, cfg.action_box.upper()) ==
          doctest::Approx(std::exp(-0.005 * d) - 1.0).epsilon(1e-12));
}

TEST_CASE("quadrotor with a point disturbance is deterministic") {
    QuadrotorConfig cfg = QuadrotorConfig::load(default_quadrotor_config_path());
    cfg.W = Zonotope(cfg.W.center(), Mat::Zero(cfg.W.dim(), cfg.W.order()));
    Rng r1(1), r2(99);
    Vec const s = cfg.Sr.center();
    Vec const a = chebyshev_center(quadrotor_feasible_set(cfg, s)).center;
    CHECK(quadrotor_step(cfg, s, a, r1).next_state == quadrotor_step(cfg, s, a, r2).next_state);
    CHECK((quadrotor_step(cfg, s, a, r1).next_state - (cfg.A * s + cfg.B * a + cfg.W.center())).norm() < 1e-15);
}

TEST_CASE("smaller disturbance gives a larger feasible set") {
    QuadrotorConfig const cfg = QuadrotorConfig::load(default_quadrotor_config_path());
    QuadrotorConfig calm = cfg;
    calm.W = Zonotope(cfg.W.center(), 0.5 * cfg.W.generators());
    Rng rng(2);
    QuadrotorEnv env(cfg);
    for (int k = 0; k < 20; ++k) {
        Vec const s = env.reset(rng);
        HPolytope const p = quadrotor_feasible_set(cfg, s);
        HPolytope const q = quadrotor_feasible_set(calm, s);
        for (auto const& a : fixtures::points_inside(p, outer_interval(p), 200, rng)) CHECK(contains(q, a, 1e-12));
    }
}

TEST_CASE("quadrotor rollouts stay in the invariant set") {
    QuadrotorConfig const cfg = QuadrotorConfig::load(default_quadrotor_config_path());
    QuadrotorEnv env(cfg);
    Rng rng(3);
    env.reset(rng);
    DiagGaussian const g(cfg.action_box.center(), cfg.action_box.half_widths());
    int outside = 0;
    for (int t = 0; t < 10000; ++t) {
        HPolytope const p = env.feasible_set();
        Vec const a = hybrid_sample(g, p, 20, {}, rng).value;
        StepResult const r = env.step(a, rng);
        outside += contains(cfg.Sr, r.next_state, 1e-9) ? 0 : 1;
        if (r.done) env.reset(rng);
    }
    CHECK(outside == 0);
}

TEST_CASE("config round trip and validation") {
    SeekerConfig const cfg = SeekerConfig::default_3d();
    SeekerConfig const back = SeekerConfig::from_json(cfg.to_json());
    CHECK(back.dim == 3);
    CHECK(back.start == cfg.start);
    CHECK(back.obstacles.size() == cfg.obstacles.size());
    SeekerConfig bad = cfg;
    bad.start = cfg.obstacles[0].center;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
}
