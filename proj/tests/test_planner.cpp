#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "flock/planner.hpp"
#include "flock/constraints.hpp"
#include "flock/primitives.hpp"

using namespace flock;

namespace {

FlockConfig base_config() {
    FlockConfig c;
    c.n_agents = 4;
    c.k = 2;
    c.body_radius = 0.1;
    c.flock_radius = 2.0;
    c.alpha = 1.0;
    c.v_max = 2.0;
    c.u_max = 4.0;
    c.horizon = 1.0;
    c.plan_steps = 20;
    c.sim_dt = 0.05;
    c.replan_interval = 0.25;
    c.total_time = 10.0;
    c.seed = 1;
    return c;
}

Trajectory constant_velocity_plan(const BoidState& x0, double t0, double dt, int steps) {
    return make_trajectory(x0, t0, dt, std::vector<Vec2>(steps, Vec2{}));
}

} // namespace

TEST_CASE("unconstrained rest problem returns zero control") {
    PlanProblem prob;
    prob.agent = 0;
    prob.t0 = 0.0;
    prob.tf = 1.0;
    prob.x0 = {{0, 0}, {0, 0}};
    prob.config = base_config();

    PlanSolution sol = plan(prob);
    CHECK(sol.converged);
    CHECK(sol.cost == doctest::Approx(0.0).epsilon(1e-12));
    for (const Vec2& u : sol.trajectory.controls) CHECK(u.norm() < 1e-9);
    CHECK(sol.max_safety_violation == 0.0);
}

TEST_CASE("pinned-endpoint plans reproduce the analytic arc") {
    FlockConfig cfg = base_config();
    cfg.v_max = 100.0;
    cfg.u_max = 200.0;
    cfg.plan_steps = 100;

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        PlanProblem prob;
        prob.t0 = 0.0;
        prob.tf = 1.0;
        prob.x0 = {{unit(rng), unit(rng)}, {unit(rng), unit(rng)}};
        prob.pinned_terminal = BoidState{{unit(rng), unit(rng)}, {unit(rng), unit(rng)}};
        prob.config = cfg;

        PlanSolution sol = plan(prob);
        REQUIRE(sol.converged);

        UnconstrainedArc arc = solve_bvp(prob.x0, *prob.pinned_terminal, 0.0, 1.0);
        const double dt = 1.0 / cfg.plan_steps;
        double linf = 0.0;
        for (int k = 0; k < cfg.plan_steps; ++k) {
            const Vec2 expected = arc.control_at((k + 0.5) * dt);
            linf = std::max(linf, (sol.trajectory.controls[k] - expected).norm());
        }
        CHECK(linf <= 1e-3 * cfg.u_max);
        const double analytic = arc.cost();
        CHECK(std::fabs(sol.cost - analytic) <= 0.01 * std::max(analytic, 1e-6));
    }
}

TEST_CASE("rest-to-rest pinned plan reproduces cost 6") {
    FlockConfig cfg = base_config();
    cfg.v_max = 100.0;
    cfg.u_max = 200.0;
    cfg.plan_steps = 100;

    PlanProblem prob;
    prob.t0 = 0.0;
    prob.tf = 1.0;
    prob.x0 = {{0, 0}, {0, 0}};
    prob.pinned_terminal = BoidState{{1, 0}, {0, 0}};
    prob.config = cfg;

    PlanSolution sol = plan(prob);
    REQUIRE(sol.converged);
    CHECK(sol.cost == doctest::Approx(6.0).epsilon(0.01));
}

TEST_CASE("head-on neighbors stay separated") {
    FlockConfig cfg = base_config();
    cfg.u_max = 5.0;
    cfg.v_max = 2.0;
    cfg.plan_steps = 50;
    cfg.flock_radius = 5.0; // task slack irrelevant here

    PlanProblem prob;
    prob.agent = 0;
    prob.t0 = 0.0;
    prob.tf = 1.0;
    prob.x0 = {{0, 0}, {0.5, 0}};
    prob.config = cfg;
    const double dt = 1.0 / cfg.plan_steps;
    prob.neighbor_trajectories.emplace(
        1, constant_velocity_plan({{0.41, 0}, {-0.5, 0}}, 0.0, dt, cfg.plan_steps));

    PlanSolution sol = plan(prob);
    CHECK(sol.converged);
    CHECK(sol.max_safety_violation <= hard_safety_tol(cfg.body_radius));

    // Dense re-sampling: knot margins are exact, between knots allow the
    // quadratic-arc dip at this dt.
    const Trajectory& mine = sol.trajectory;
    const Trajectory& theirs = prob.neighbor_trajectories.at(1);
    double min_dist = 1e9;
    for (int s = 0; s <= 1000; ++s) {
        const double t = s * 1e-3;
        min_dist = std::min(min_dist, (mine.state_at(t).position -
                                       theirs.state_at(t).position).norm());
    }
    const double allowance = 5e-3;
    CHECK(min_dist >= 2 * cfg.body_radius - allowance);
}

TEST_CASE("total slack is non-increasing in alpha") {
    const double alphas[] = {0.1, 1.0, 10.0};
    double previous = -1.0;
    for (int idx = 0; idx < 3; ++idx) {
        FlockConfig cfg = base_config();
        cfg.alpha = alphas[idx];
        cfg.u_max = 10.0;
        cfg.v_max = 10.0;
        cfg.horizon = 2.0;
        cfg.plan_steps = 40;
        cfg.replan_interval = 0.5;

        PlanProblem prob;
        prob.t0 = 0.0;
        prob.tf = 2.0;
        prob.x0 = {{0, 0}, {0, 0}};
        prob.config = cfg;
        const double dt = 2.0 / cfg.plan_steps;
        prob.neighbor_trajectories.emplace(
            1, constant_velocity_plan({{6, 1}, {0, 0}}, 0.0, dt, cfg.plan_steps));
        prob.neighbor_trajectories.emplace(
            2, constant_velocity_plan({{6, -1}, {0, 0}}, 0.0, dt, cfg.plan_steps));

        PlanSolution sol = plan(prob);
        REQUIRE(sol.converged);
        double total_slack = 0.0;
        for (double s : sol.trajectory.slacks) total_slack += s * dt;
        CHECK(total_slack > 0.0); // the task genuinely binds here
        if (previous >= 0.0) CHECK(total_slack <= previous + 1e-9 * (1.0 + previous));
        previous = total_slack;
    }
}

TEST_CASE("returned trajectories satisfy the exact discrete recurrence") {
    FlockConfig cfg = base_config();
    PlanProblem prob;
    prob.t0 = 0.0;
    prob.tf = 1.0;
    prob.x0 = {{0.3, -0.2}, {0.4, 0.1}};
    prob.config = cfg;
    const double dt = 1.0 / cfg.plan_steps;
    prob.neighbor_trajectories.emplace(
        1, constant_velocity_plan({{1.5, 0.5}, {-0.2, 0}}, 0.0, dt, cfg.plan_steps));

    PlanSolution sol = plan(prob);
    BoidState s = sol.trajectory.states[0];
    for (int k = 0; k < sol.trajectory.steps(); ++k) {
        s = integrate_step(s, sol.trajectory.controls[k], dt);
        CHECK((s.position - sol.trajectory.states[k + 1].position).norm() == 0.0);
        CHECK((s.velocity - sol.trajectory.states[k + 1].velocity).norm() == 0.0);
    }
    for (const Vec2& u : sol.trajectory.controls) {
        CHECK(u.norm() <= cfg.u_max * (1 + 1e-12));
    }
}

TEST_CASE("an unfixable overlap is reported, not hidden") {
    FlockConfig cfg = base_config();
    cfg.u_max = 0.05;
    cfg.v_max = 0.5;

    PlanProblem prob;
    prob.t0 = 0.0;
    prob.tf = 1.0;
    prob.x0 = {{0, 0}, {0, 0}};
    prob.config = cfg;
    const double dt = 1.0 / cfg.plan_steps;
    prob.neighbor_trajectories.emplace(
        1, constant_velocity_plan({{0.05, 0}, {0, 0}}, 0.0, dt, cfg.plan_steps));

    PlanSolution sol = plan(prob);
    CHECK_FALSE(sol.converged);
    CHECK(sol.max_safety_violation > hard_safety_tol(cfg.body_radius));
}

TEST_CASE("replanning from an accepted solution does not raise its cost") {
    // Convexification accepts steps only when the merit does not increase,
    // so re-solving with the previous solution as the warm start can only
    // keep or improve the objective.
    FlockConfig cfg = base_config();
    cfg.flock_radius = 1.0;
    PlanProblem prob;
    prob.t0 = 0.0;
    prob.tf = 1.0;
    prob.x0 = {{0, 0}, {0.6, 0.1}};
    prob.config = cfg;
    const double dt = 1.0 / cfg.plan_steps;
    prob.neighbor_trajectories.emplace(
        1, constant_velocity_plan({{2.5, 0}, {-0.4, 0}}, 0.0, dt, cfg.plan_steps));
    prob.neighbor_trajectories.emplace(
        2, constant_velocity_plan({{2.5, 1}, {-0.4, 0}}, 0.0, dt, cfg.plan_steps));

    PlanSolution first = plan(prob);
    REQUIRE(first.converged);
    PlanSolution second = plan(prob, first.trajectory);
    CHECK(second.converged);
    CHECK(second.cost <= first.cost + 1e-9 * (1.0 + first.cost));
}

TEST_CASE("evaluate_objective examples") {
    BoidState x0{{0, 0}, {0, 0}};

    Trajectory zeros = make_trajectory(x0, 0.0, 0.5, std::vector<Vec2>(4, Vec2{}));
    CHECK(evaluate_objective(zeros, 3.0) == doctest::Approx(0.0));

    // constant ||u|| = 1 over horizon 2
    Trajectory unit = make_trajectory(x0, 0.0, 0.5, std::vector<Vec2>(4, Vec2{1, 0}));
    CHECK(evaluate_objective(unit, 0.0) == doctest::Approx(1.0));

    // zero control, slack eta^2 = 2, alpha = 3, horizon 1
    Trajectory slacked = make_trajectory(x0, 0.0, 0.25, std::vector<Vec2>(4, Vec2{}),
                                         std::vector<double>(4, 2.0));
    CHECK(evaluate_objective(slacked, 3.0) == doctest::Approx(3.0));
}

TEST_CASE("extend_ballistic appends drift and nothing else") {
    BoidState x0{{0, 0}, {1, 0}};
    Trajectory traj = make_trajectory(x0, 0.0, 0.25, std::vector<Vec2>(4, Vec2{}));

    Trajectory same = extend_ballistic(traj, traj.end_time());
    CHECK(same.steps() == traj.steps());

    Trajectory longer = extend_ballistic(traj, 2.0);
    CHECK(longer.end_time() == doctest::Approx(2.0));
    CHECK(longer.states.back().position.x == doctest::Approx(2.0));
    CHECK(longer.states.back().position.y == doctest::Approx(0.0));

    double energy = 0.0;
    for (int k = traj.steps(); k < longer.steps(); ++k) {
        energy += longer.controls[k].norm_sq();
    }
    CHECK(energy == 0.0);
}
