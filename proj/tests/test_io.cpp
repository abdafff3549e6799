#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "flock/log_io.hpp"
#include "flock/metrics.hpp"
#include "flock/scenario_io.hpp"

using namespace flock;

namespace {

ScenarioSpec sample_spec() {
    ScenarioSpec spec;
    spec.config.n_agents = 6;
    spec.config.k = 2;
    spec.config.body_radius = 0.05;
    spec.config.flock_radius = 0.8;
    spec.config.alpha = 1.25;
    spec.config.v_max = 2.0;
    spec.config.u_max = 6.0;
    spec.config.horizon = 1.5;
    spec.config.plan_steps = 30;
    spec.config.sim_dt = 0.05;
    spec.config.replan_interval = 0.25;
    spec.config.total_time = 8.0;
    spec.config.seed = 20;
    spec.topology_mode = TopologyMode::DynamicKnn;
    spec.placement.mode = PlacementMode::UniformDisk;
    spec.placement.radius = 1.0;
    spec.placement.speed_max = 1.0;
    return spec;
}

bool specs_equal(const ScenarioSpec& a, const ScenarioSpec& b) {
    const FlockConfig &ca = a.config, &cb = b.config;
    if (ca.n_agents != cb.n_agents || ca.k != cb.k || ca.body_radius != cb.body_radius ||
        ca.flock_radius != cb.flock_radius || ca.alpha != cb.alpha ||
        ca.v_max != cb.v_max || ca.u_max != cb.u_max || ca.horizon != cb.horizon ||
        ca.plan_steps != cb.plan_steps || ca.sim_dt != cb.sim_dt ||
        ca.replan_interval != cb.replan_interval || ca.total_time != cb.total_time ||
        ca.seed != cb.seed) {
        return false;
    }
    if (a.topology_mode != b.topology_mode) return false;
    if (a.placement.mode != b.placement.mode || a.placement.radius != b.placement.radius ||
        a.placement.spacing != b.placement.spacing ||
        a.placement.columns != b.placement.columns ||
        a.placement.speed_max != b.placement.speed_max) {
        return false;
    }
    if (a.initial_states.size() != b.initial_states.size()) return false;
    for (std::size_t i = 0; i < a.initial_states.size(); ++i) {
        if (!(a.initial_states[i].position == b.initial_states[i].position) ||
            !(a.initial_states[i].velocity == b.initial_states[i].velocity)) {
            return false;
        }
    }
    if (a.overrides.size() != b.overrides.size()) return false;
    for (const auto& [id, ov] : a.overrides) {
        const auto it = b.overrides.find(id);
        if (it == b.overrides.end()) return false;
        if (ov.alpha != it->second.alpha || ov.v_max != it->second.v_max ||
            ov.u_max != it->second.u_max) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("scenario round-trip: uniform disk") {
    ScenarioSpec spec = sample_spec();
    CHECK(specs_equal(parse_scenario(serialize_scenario(spec)), spec));
}

TEST_CASE("scenario round-trip: explicit states and overrides") {
    ScenarioSpec spec = sample_spec();
    spec.config.n_agents = 3;
    spec.config.k = 1;
    spec.placement.mode = PlacementMode::Explicit;
    spec.placement.speed_max = 0.0;
    spec.initial_states = {{{0.125, -0.25}, {0.5, 0.0}},
                           {{1.0, 0.3}, {-0.1, 0.2}},
                           {{2.0, -1.0}, {0.05, 0.0}}};
    spec.overrides[1].alpha = 2.5;
    spec.overrides[2].u_max = 3.0;
    CHECK(specs_equal(parse_scenario(serialize_scenario(spec)), spec));
}

TEST_CASE("scenario round-trip: grid placement") {
    ScenarioSpec spec = sample_spec();
    spec.placement.mode = PlacementMode::Grid;
    spec.placement.spacing = 0.713;
    spec.placement.columns = 3;
    CHECK(specs_equal(parse_scenario(serialize_scenario(spec)), spec));
}

TEST_CASE("scenario parsing names the offending key") {
    ScenarioSpec spec = sample_spec();
    std::string text = serialize_scenario(spec);

    SUBCASE("missing required key") {
        const auto pos = text.find("alpha = ");
        text.erase(pos, text.find('\n', pos) - pos + 1);
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("alpha"),
                             ValidationError);
    }
    SUBCASE("bad number") {
        const auto pos = text.find("v_max = 2");
        text.replace(pos, 9, "v_max = x");
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("v_max"),
                             ValidationError);
    }
    SUBCASE("invalid k") {
        const auto pos = text.find("k = 2");
        text.replace(pos, 5, "k = 9");
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("k"), ValidationError);
    }
    SUBCASE("unknown key") {
        text += "\nwhatever = 3\n";
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("whatever"),
                             ValidationError);
    }
    SUBCASE("unknown topology mode") {
        const auto pos = text.find("topology_mode = dynamic-knn");
        text.replace(pos, 27, "topology_mode = sometimes##");
        CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("topology_mode"),
                             ValidationError);
    }
}

TEST_CASE("trajectory CSV round-trips through its own parser") {
    ScenarioSpec spec = sample_spec();
    spec.config.n_agents = 3;
    spec.config.k = 1;
    spec.config.total_time = 1.0;
    spec.placement.radius = 0.6;
    SimulationLog log = run(spec);

    const std::string text = trajectory_csv(log);
    CHECK(text.rfind(kTrajectoryCsvHeader, 0) == 0);

    const std::vector<TrajectoryCsvRow> rows = parse_trajectory_csv(text);
    REQUIRE(static_cast<int>(rows.size()) == log.n_times() * log.n_agents());

    std::size_t idx = 0;
    for (int ti = 0; ti < log.n_times(); ++ti) {
        for (int i = 0; i < log.n_agents(); ++i, ++idx) {
            const TrajectoryCsvRow& row = rows[idx];
            CHECK(row.agent == static_cast<AgentId>(i));
            CHECK(row.t == doctest::Approx(log.times[ti]).epsilon(1e-12));
            CHECK(row.px ==
                  doctest::Approx(log.states[ti][i].position.x).epsilon(1e-12));
            CHECK(row.vy ==
                  doctest::Approx(log.states[ti][i].velocity.y).epsilon(1e-12));
            CHECK(row.ux ==
                  doctest::Approx(log.applied_controls[ti][i].x).epsilon(1e-12));
            CHECK(row.g == doctest::Approx(log.task_residuals[ti][i]).epsilon(1e-12));
            CHECK(row.eta_sq ==
                  doctest::Approx(log.slack_values[ti][i]).epsilon(1e-12));
            CHECK(row.min_safety ==
                  doctest::Approx(log.min_safety_margins[ti][i]).epsilon(1e-12));
        }
    }

    // rows sorted by (t, agent)
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const bool ordered = rows[r - 1].t < rows[r].t ||
                             (rows[r - 1].t == rows[r].t && rows[r - 1].agent < rows[r].agent);
        CHECK(ordered);
    }

    CHECK_THROWS_AS(parse_trajectory_csv("t,agent,px\n"), ValidationError);
}

TEST_CASE("event log and report formats") {
    ScenarioSpec spec = sample_spec();
    spec.config.total_time = 2.0;
    SimulationLog log = run(spec);
    RunReport report = make_report(log);

    const std::string events = event_log_text(log);
    CHECK(events.find(",replan,initial") != std::string::npos);

    const std::string text = report_text(report);
    for (const char* key :
         {"consensus_time:", "final_velocity_disagreement:", "min_safety_margin:",
          "max_task_residual:", "flock_diameter_final:", "diameter_bound:",
          "control_continuity_ok:", "safety_failures:", "total_energy[0]:",
          "integrated_slack[5]:"}) {
        CHECK(text.find(key) != std::string::npos);
    }
}
