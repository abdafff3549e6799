#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "flock/constraints.hpp"
#include "flock/primitives.hpp"

using namespace flock;

TEST_CASE("solve_bvp rest-to-rest unit displacement") {
    BoidState x0{{0, 0}, {0, 0}};
    BoidState xf{{1, 0}, {0, 0}};
    UnconstrainedArc arc = solve_bvp(x0, xf, 0.0, 1.0);

    // u(t) = 6 - 12t along x
    CHECK(arc.control_at(0.0).x == doctest::Approx(6.0));
    CHECK(arc.control_at(1.0).x == doctest::Approx(-6.0));
    CHECK(arc.control_at(0.5).x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(arc.control_at(0.25).y == doctest::Approx(0.0));
    CHECK(arc.cost() == doctest::Approx(6.0));

    // p(t) = 3t^2 - 2t^3
    for (double t : {0.25, 0.5, 0.75}) {
        BoidState s = arc.state_at(x0, t);
        CHECK(s.position.x == doctest::Approx(3 * t * t - 2 * t * t * t));
        CHECK(s.position.y == doctest::Approx(0.0));
    }
}

TEST_CASE("solve_bvp ballistic target needs zero control") {
    BoidState x0{{2, -1}, {0.5, 0.25}};
    BoidState xf{{2 + 0.5 * 3, -1 + 0.25 * 3}, {0.5, 0.25}};
    UnconstrainedArc arc = solve_bvp(x0, xf, 1.0, 4.0);
    CHECK(arc.a.norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(arc.b.norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(arc.cost() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("solve_bvp scales linearly with the displacement") {
    BoidState x0{{0, 0}, {0, 0}};
    BoidState xf1{{1, 0.5}, {0, 0}};
    BoidState xf2{{2, 1.0}, {0, 0}};
    UnconstrainedArc arc1 = solve_bvp(x0, xf1, 0.0, 2.0);
    UnconstrainedArc arc2 = solve_bvp(x0, xf2, 0.0, 2.0);
    CHECK(arc2.a.x == doctest::Approx(2 * arc1.a.x));
    CHECK(arc2.b.y == doctest::Approx(2 * arc1.b.y));
    CHECK(arc2.cost() == doctest::Approx(4 * arc1.cost()));
}

TEST_CASE("solve_bvp rejects an empty interval") {
    BoidState x0{{0, 0}, {0, 0}};
    CHECK_THROWS_AS(solve_bvp(x0, x0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(solve_bvp(x0, x0, 2.0, 1.0), std::domain_error);
}

TEST_CASE("forward-integrating the arc reproduces the endpoint") {
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::uniform_real_distribution<double> span(0.2, 5.0);
    for (int trial = 0; trial < 300; ++trial) {
        BoidState x0{{dist(rng), dist(rng)}, {dist(rng), dist(rng)}};
        BoidState xf{{dist(rng), dist(rng)}, {dist(rng), dist(rng)}};
        const double t0 = dist(rng);
        const double tf = t0 + span(rng);
        UnconstrainedArc arc = solve_bvp(x0, xf, t0, tf);

        BoidState end = arc.state_at(x0, tf);
        const double scale = 1.0 + xf.position.norm() + xf.velocity.norm();
        CHECK((end.position - xf.position).norm() < 1e-10 * scale);
        CHECK((end.velocity - xf.velocity).norm() < 1e-10 * scale);

        // Cross-check the closed-form state with midpoint-held integration.
        BoidState stepped = x0;
        const int steps = 400;
        const double dt = (tf - t0) / steps;
        for (int k = 0; k < steps; ++k) {
            stepped = integrate_step(stepped, arc.control_at(t0 + (k + 0.5) * dt), dt);
        }
        CHECK((stepped.velocity - xf.velocity).norm() < 1e-9 * scale);
        CHECK((stepped.position - xf.position).norm() < 1e-4 * scale);
    }
}

TEST_CASE("arc_control dispatches on the primitive kind") {
    ArcContext ctx;
    CHECK(arc_control(ArcKind::zero_control(), 3.0, ctx) == Vec2{0, 0});

    ctx.partner_control = Vec2{1, 2};
    CHECK(arc_control(ArcKind::safety_riding(7), 0.0, ctx) == Vec2{1, 2});

    ctx.center_accel = Vec2{0, 0};
    CHECK(arc_control(ArcKind::task_riding(), 0.0, ctx) == Vec2{0, 0});

    UnconstrainedArc arc;
    arc.a = {1, 0};
    arc.b = {0, 1};
    arc.t_start = 1.0;
    arc.t_end = 2.0;
    ctx.arc = &arc;
    Vec2 u = arc_control(ArcKind::interior_bvp(), 1.5, ctx);
    CHECK(u.x == doctest::Approx(0.5));
    CHECK(u.y == doctest::Approx(1.0));
}

TEST_CASE("arc_control rejects a missing context signal") {
    ArcContext empty;
    CHECK_THROWS_AS(arc_control(ArcKind::safety_riding(1), 0.0, empty), std::logic_error);
    CHECK_THROWS_AS(arc_control(ArcKind::task_riding(), 0.0, empty), std::logic_error);
    CHECK_THROWS_AS(arc_control(ArcKind::interior_bvp(), 0.0, empty), std::logic_error);
}

TEST_CASE("zero-control arcs freeze all margins at velocity consensus") {
    // Agents sharing one velocity and coasting: every pairwise displacement
    // and every agent-to-center displacement is constant, so no constraint
    // can drift toward violation.
    const Vec2 v_c{0.7, -0.3};
    std::vector<BoidState> states{
        {{0, 0}, v_c}, {{1.5, 0}, v_c}, {{0, 1.5}, v_c}, {{1.5, 1.5}, v_c}};
    const double body_radius = 0.2;
    const double flock_radius = 2.0;

    std::vector<double> margins0, residuals0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        Vec2 center_sum;
        for (std::size_t j = 0; j < states.size(); ++j) {
            if (j == i) continue;
            center_sum += states[j].position;
            if (j > i) {
                margins0.push_back(safety_margin(
                    displacement(states[i].position, states[j].position), body_radius));
            }
        }
        residuals0.push_back(
            task_residual(states[i].position, center_sum / 3.0, flock_radius));
        CHECK(residuals0.back() < 0.0);
    }

    for (int step = 0; step < 200; ++step) {
        for (auto& s : states) s = integrate_step(s, {0, 0}, 0.05);
        std::size_t margin_idx = 0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            Vec2 center_sum;
            for (std::size_t j = 0; j < states.size(); ++j) {
                if (j == i) continue;
                center_sum += states[j].position;
                if (j > i) {
                    const double margin = safety_margin(
                        displacement(states[i].position, states[j].position), body_radius);
                    CHECK(margin == doctest::Approx(margins0[margin_idx]).epsilon(1e-12));
                    ++margin_idx;
                }
            }
            const double residual =
                task_residual(states[i].position, center_sum / 3.0, flock_radius);
            CHECK(residual == doctest::Approx(residuals0[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("check_control_continuity flags O(1) jumps") {
    std::vector<Vec2> constant(50, Vec2{0.3, -0.2});
    CHECK(check_control_continuity(constant, 0.01, 1.0).ok);

    std::vector<Vec2> jumpy = constant;
    jumpy[20] = {1.3, -0.2}; // unit jump in, unit jump out
    ContinuityCheck res = check_control_continuity(jumpy, 0.01, 1.0);
    CHECK_FALSE(res.ok);
    CHECK(res.first_violation == 19);

    // Sampled u(t) = (6-12t, 0) at dt=0.01: rate 12 < L = 13.
    std::vector<Vec2> ramp;
    for (int k = 0; k <= 100; ++k) ramp.push_back({6.0 - 12.0 * (k * 0.01), 0.0});
    CHECK(check_control_continuity(ramp, 0.01, 13.0).ok);
    CHECK(check_control_continuity(ramp, 0.01, 11.0).ok == false);
}
