#include "truncpol/envs.hpp"

#include <cmath>

#include "truncpol/csv.hpp"
#include "truncpol/errors.hpp"

namespace truncpol {
namespace {

Ball ball_from_json(Json const& j) {
    return {vec_from_json(j.at("center")), j.at("radius").get<double>()};
}

Json ball_to_json(Ball const& b) { return {{"center", to_json(b.center)}, {"radius", b.radius}}; }

Vec vec_of(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

Vec constant(int d, double c) { return Vec::Constant(d, c); }

}  // namespace

void SeekerConfig::validate() const {
    if (dim != 2 && dim != 3) throw ArgumentError("SeekerConfig: dim must be 2 or 3");
    if (!(bounds_half_width > 0)) throw ArgumentError("SeekerConfig: bounds must be positive");
    if (max_steps < 1) throw ArgumentError("SeekerConfig: max_steps must be >= 1");
    if (action_box.dim() != dim) throw ArgumentError("SeekerConfig: action box dimension");
    if ((action_box.lower().array() > 0).any() || (action_box.upper().array() < 0).any())
        throw ArgumentError("SeekerConfig: action box must contain 0");
    auto inside = [&](Vec const& p) {
        return p.size() == dim && (p.array().abs() <= bounds_half_width).all();
    };
    for (auto const& o : obstacles)
        if (!inside(o.center) || !(o.radius > 0)) throw ArgumentError("SeekerConfig: bad obstacle");
    if (!inside(goal.center) || !(goal.radius > 0)) throw ArgumentError("SeekerConfig: bad goal");
    if (!inside(start) || seeker_collides(*this, start))
        throw ArgumentError("SeekerConfig: start must lie in free space");
}

SeekerConfig SeekerConfig::default_2d() {
    SeekerConfig c;
    c.dim = 2;
    c.obstacles = {{vec_of({-4.0, 0.0}), 1.5}, {vec_of({1.0, -3.0}), 1.5}, {vec_of({3.0, 6.0}), 1.0}};
    c.goal = {vec_of({7.0, 7.0}), 0.5};
    c.action_box = Interval(constant(2, -1.0), constant(2, 1.0));
    c.start = vec_of({-8.0, -8.0});
    return c;
}

SeekerConfig SeekerConfig::default_3d() {
    SeekerConfig c;
    c.dim = 3;
    c.obstacles = {{vec_of({-4.0, 0.0, -2.0}), 1.5},
                   {vec_of({1.0, -3.0, 2.0}), 1.5},
                   {vec_of({3.0, 6.0, 3.0}), 1.0},
                   {vec_of({-1.0, 2.0, -5.0}), 1.2}};
    c.goal = {vec_of({7.0, 7.0, 7.0}), 0.5};
    c.action_box = Interval(constant(3, -1.0), constant(3, 1.0));
    c.start = vec_of({-8.0, -8.0, -8.0});
    return c;
}

SeekerConfig SeekerConfig::from_json(Json const& j) {
    SeekerConfig c;
    c.dim = j.at("dim").get<int>();
    c.bounds_half_width = j.value("bounds_half_width", 10.0);
    for (auto const& o : j.at("obstacles")) c.obstacles.push_back(ball_from_json(o));
    c.goal = ball_from_json(j.at("goal"));
    c.action_box = interval_from_json(j.at("action_set"));
    c.max_steps = j.value("max_steps", 100);
    c.start = vec_from_json(j.at("start"));
    c.validate();
    return c;
}

Json SeekerConfig::to_json() const {
    Json obs = Json::array();
    for (auto const& o : obstacles) obs.push_back(ball_to_json(o));
    return {{"dim", dim},
            {"bounds_half_width", bounds_half_width},
            {"obstacles", obs},
            {"goal", ball_to_json(goal)},
            {"action_set", set_to_json(action_box)},
            {"max_steps", max_steps},
            {"start", truncpol::to_json(start)}};
}

bool seeker_collides(SeekerConfig const& cfg, Vec const& state) {
    if ((state.array().abs() > cfg.bounds_half_width).any()) return true;
    for (auto const& o : cfg.obstacles)
        if ((state - o.center).norm() < o.radius) return true;
    return false;
}

HPolytope seeker_feasible_set(SeekerConfig const& cfg, Vec const& state) {
    int const d = cfg.dim;
    if (state.size() != d) throw ArgumentError("seeker_feasible_set: state dimension");
    if (seeker_collides(cfg, state))
        throw InvalidStateError("seeker_feasible_set: state inside an obstacle or out of bounds");
    auto const n_obs = static_cast<Eigen::Index>(cfg.obstacles.size());
    Eigen::Index const rows = 4 * d + n_obs;
    Mat A = Mat::Zero(rows, d);
    Vec b(rows);
    // Action box.
    A.topRows(d) = Mat::Identity(d, d);
    A.middleRows(d, d) = -Mat::Identity(d, d);
    b.head(d) = cfg.action_box.upper();
    b.segment(d, d) = -cfg.action_box.lower();
    // Workspace boundary.
    A.middleRows(2 * d, d) = Mat::Identity(d, d);
    A.middleRows(3 * d, d) = -Mat::Identity(d, d);
    b.segment(2 * d, d) = cfg.bounds_half_width - state.array();
    b.segment(3 * d, d) = cfg.bounds_half_width + state.array();
    // Tangent halfspace of each obstacle facing the agent.
    for (Eigen::Index i = 0; i < n_obs; ++i) {
        auto const& o = cfg.obstacles[static_cast<std::size_t>(i)];
        Vec const n = (o.center - state).normalized();
        double const offset = n.dot(o.center) - o.radius;
        A.row(4 * d + i) = n.transpose();
        b[4 * d + i] = std::max(0.0, offset - n.dot(state));
    }
    return HPolytope(std::move(A), std::move(b));
}

StepResult seeker_step(SeekerConfig const& cfg, Vec const& state, Vec const& action,
                       int steps_taken) {
    if (action.size() != cfg.dim) throw ArgumentError("seeker_step: action dimension");
    StepResult r;
    r.next_state = state + action;
    bool const goal = (r.next_state - cfg.goal.center).norm() < cfg.goal.radius;
    bool const crash = seeker_collides(cfg, r.next_state);
    if (goal) {
        r.reward = 100.0;
        r.info.goal_reached = true;
    } else if (crash) {
        r.reward = -100.0;
        r.info.collision = true;
    } else {
        double const prev = (state - cfg.goal.center).norm();
        double const curr = (r.next_state - cfg.goal.center).norm();
        r.reward = prev - curr - 1.0;
        r.info.truncated = steps_taken + 1 >= cfg.max_steps;
    }
    r.done = r.info.goal_reached || r.info.collision || r.info.truncated;
    return r;
}

SeekerEnv::SeekerEnv(SeekerConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    reset();
}

Vec const& SeekerEnv::reset() {
    state_ = cfg_.start;
    steps_ = 0;
    return state_;
}

StepResult SeekerEnv::step(Vec const& action) {
    StepResult r = seeker_step(cfg_, state_, action, steps_);
    state_ = r.next_state;
    ++steps_;
    return r;
}

// ------------------------------------------------------------- Quadrotor

void QuadrotorConfig::validate() const {
    Eigen::Index const m = A.rows();
    if (A.cols() != m || B.rows() != m) throw ArgumentError("QuadrotorConfig: A/B dimensions");
    if (W.dim() != m || Sr.dim() != m || goal_state.size() != m)
        throw ArgumentError("QuadrotorConfig: set dimensions must match the state");
    if (action_polytope.dim() != B.cols() || action_box.dim() != B.cols())
        throw ArgumentError("QuadrotorConfig: action set dimension must match B");
    if (Sr.order() == 0) throw ArgumentError("QuadrotorConfig: Sr must have generators");
    if (max_steps < 1) throw ArgumentError("QuadrotorConfig: max_steps must be >= 1");
    if (!(start_fraction >= 0 && start_fraction <= 1))
        throw ArgumentError("QuadrotorConfig: start_fraction must be in [0, 1]");
}

QuadrotorConfig QuadrotorConfig::from_json(Json const& j) {
    QuadrotorConfig c;
    c.A = mat_from_json(j.at("A"));
    c.B = mat_from_json(j.at("B"));
    c.W = zonotope_from_json(j.at("W"));
    c.Sr = zonotope_from_json(j.at("Sr"));
    ConstraintSet const act = set_from_json(j.at("action_set"));
    if (auto const* box = std::get_if<Interval>(&act)) {
        c.action_polytope = HPolytope::from_interval(*box);
        c.action_box = *box;
    } else if (auto const* poly = std::get_if<HPolytope>(&act)) {
        c.action_polytope = *poly;
        c.action_box = outer_interval(*poly);
    } else {
        throw ArgumentError("QuadrotorConfig: action_set must be an interval or hpolytope");
    }
    c.goal_state = vec_from_json(j.at("goal_state"));
    c.max_steps = j.value("max_steps", 200);
    c.start_fraction = j.value("start_fraction", 0.5);
    c.validate();
    return c;
}

QuadrotorConfig QuadrotorConfig::load(std::string const& path) {
    return from_json(read_json_file(path));
}

std::string default_quadrotor_config_path() {
    return std::string(TRUNCPOL_SOURCE_DIR) + "/configs/quadrotor.json";
}

HPolytope quadrotor_feasible_set(QuadrotorConfig const& cfg, Vec const& state) {
    if (state.size() != cfg.A.rows()) throw ArgumentError("quadrotor_feasible_set: state dimension");
    if (!contains(cfg.Sr, state, 1e-9))
        throw InvalidStateError("quadrotor_feasible_set: state outside the invariant set");
    Mat L(cfg.A.rows(), cfg.W.order() + cfg.Sr.order());
    L << cfg.W.generators(), cfg.Sr.generators();
    Vec const drift = cfg.A * state;
    Eigen::Index const da = cfg.B.cols();
    std::vector<Vec> rows;
    std::vector<double> offsets;
    for (Eigen::Index k = 0; k < L.cols(); ++k) {
        for (double sign : {1.0, -1.0}) {
            Vec const l = sign * L.col(k);
            Vec const row = cfg.B.transpose() * l;
            double const offset = support(cfg.Sr, l) - support(cfg.W, l) - l.dot(drift);
            double const scale = l.norm() * (1.0 + cfg.B.norm());
            if (row.lpNorm<Eigen::Infinity>() <= 1e-13 * scale) {
                // Direction the input cannot move: a pure feasibility check.
                if (offset < -1e-9 * (1.0 + std::abs(offset)))
                    throw InvariantViolation("quadrotor_feasible_set: uncontrollable direction violated");
                continue;
            }
            rows.push_back(row);
            offsets.push_back(offset);
        }
    }
    auto const np = cfg.action_polytope.rows();
    Mat A(np + static_cast<Eigen::Index>(rows.size()), da);
    Vec b(A.rows());
    A.topRows(np) = cfg.action_polytope.normals();
    b.head(np) = cfg.action_polytope.offsets();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        A.row(np + static_cast<Eigen::Index>(i)) = rows[i].transpose();
        b[np + static_cast<Eigen::Index>(i)] = offsets[i];
    }
    HPolytope poly(std::move(A), std::move(b));
    try {
        chebyshev_center(poly);
    } catch (EmptySetError const&) {
        throw InvariantViolation("quadrotor_feasible_set: empty feasible set (invalid Sr)");
    } catch (DegenerateSetError const&) {
        throw InvariantViolation("quadrotor_feasible_set: feasible set has no interior (invalid Sr)");
    }
    return poly;
}

double quadrotor_reward(QuadrotorConfig const& cfg, Vec const& state, Vec const& action) {
    Vec const range = cfg.action_box.upper() - cfg.action_box.lower();
    double const cost = ((action - cfg.action_box.lower()).array() / range.array()).sum();
    return std::exp(-(state - cfg.goal_state).norm() - 0.005 * cost) - 1.0;
}

StepResult quadrotor_step(QuadrotorConfig const& cfg, Vec const& state, Vec const& action,
                          Rng& rng, int steps_taken) {
    if (action.size() != cfg.B.cols()) throw ArgumentError("quadrotor_step: action dimension");
    Vec beta(cfg.W.order());
    for (Eigen::Index i = 0; i < beta.size(); ++i) beta[i] = rng.uniform(-1.0, 1.0);
    StepResult r;
    r.next_state = cfg.A * state + cfg.B * action + cfg.W.center() + cfg.W.generators() * beta;
    r.reward = quadrotor_reward(cfg, state, action);
    r.info.truncated = steps_taken + 1 >= cfg.max_steps;
    r.done = r.info.truncated;
    return r;
}

QuadrotorEnv::QuadrotorEnv(QuadrotorConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    state_ = cfg_.Sr.center();
}

Vec const& QuadrotorEnv::reset(Rng& rng) {
    Vec beta(cfg_.Sr.order());
    for (Eigen::Index i = 0; i < beta.size(); ++i)
        beta[i] = rng.uniform(-cfg_.start_fraction, cfg_.start_fraction);
    state_ = cfg_.Sr.center() + cfg_.Sr.generators() * beta;
    steps_ = 0;
    return state_;
}

StepResult QuadrotorEnv::step(Vec const& action, Rng& rng) {
    StepResult r = quadrotor_step(cfg_, state_, action, rng, steps_);
    state_ = r.next_state;
    ++steps_;
    return r;
}

void write_trace(std::string const& path, std::vector<TraceRow> const& rows) {
    CsvWriter csv(path);
    if (rows.empty()) {
        csv.header({"step", "reward", "done_flag"});
        return;
    }
    std::vector<std::string> cols{"step"};
    for (Eigen::Index i = 0; i < rows.front().state.size(); ++i) cols.push_back("s" + std::to_string(i));
    for (Eigen::Index i = 0; i < rows.front().action.size(); ++i) cols.push_back("a" + std::to_string(i));
    cols.push_back("reward");
    cols.push_back("done_flag");
    csv.header(cols);
    for (auto const& r : rows) {
        std::vector<std::string> cells{std::to_string(r.step)};
        for (Eigen::Index i = 0; i < r.state.size(); ++i) cells.push_back(format_real(r.state[i]));
        for (Eigen::Index i = 0; i < r.action.size(); ++i) cells.push_back(format_real(r.action[i]));
        cells.push_back(format_real(r.reward));
        cells.push_back(r.done ? "1" : "0");
        csv.row(cells);
    }
}

}  // namespace truncpol
