#include "flock/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "flock/constraints.hpp"
#include "flock/log_io.hpp"
#include "flock/metrics.hpp"
#include "flock/planner.hpp"
#include "flock/primitives.hpp"

namespace flock {

namespace {

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6g", v);
    return buffer;
}

double min_pairwise_distance(const SimulationLog& log) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& states : log.states) {
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::size_t j = i + 1; j < states.size(); ++j) {
                best = std::min(best, (states[i].position - states[j].position).norm());
            }
        }
    }
    return best;
}

std::vector<double> disagreement_series(const SimulationLog& log) {
    std::vector<double> series;
    series.reserve(log.n_times());
    for (const auto& states : log.states) {
        series.push_back(velocity_disagreement(states));
    }
    return series;
}

double max_applied_control(const SimulationLog& log) {
    double worst = 0.0;
    for (const auto& row : log.applied_controls) {
        for (const Vec2& u : row) worst = std::max(worst, u.norm());
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Scripted ballistic traces for the constructed switch scenarios. The
// participants fly straight lines; only the owner's neighborhood machinery
// is exercised, so every quantity is exact.
// ---------------------------------------------------------------------------

struct KinematicTrace {
    double dt = 0.0;
    std::vector<NeighborhoodSnapshot> snapshots; ///< owner snapshot per step
    std::vector<int> switch_steps;               ///< indices with an event
    std::vector<SwitchEvent> events;
};

KinematicTrace script_trace(std::vector<BoidState> states, int k, double dt, int steps) {
    KinematicTrace trace;
    trace.dt = dt;
    std::vector<Vec2> no_controls(states.size());
    trace.snapshots.push_back(make_snapshot(states, no_controls, 0, k));
    for (int step = 1; step <= steps; ++step) {
        for (auto& s : states) s = integrate_step(s, {0, 0}, dt);
        NeighborhoodSnapshot snap = make_snapshot(states, no_controls, 0, k);
        auto event = detect_switch(trace.snapshots.back(), snap, step * dt);
        if (event) {
            event->symmetric = is_symmetric_switch(*event, states);
            trace.switch_steps.push_back(step);
            trace.events.push_back(*event);
        }
        trace.snapshots.push_back(std::move(snap));
    }
    return trace;
}

CheckResult symmetric_switch_check() {
    // Mirror pairs: {1,2} drift outward along x, {3,4} drift inward along y.
    // At the distance crossing the sets swap with exactly equal position and
    // velocity sums, so the neighborhood center must not jump.
    std::vector<BoidState> init{
        {{0, 0}, {0, 0}},        {{1, 0}, {0.25, 0}},  {{-1, 0}, {-0.25, 0}},
        {{0, 1.5}, {0, -0.5}},   {{0, -1.5}, {0, 0.5}},
    };
    const double dt = 0.01;
    const double v_max = 0.5;
    KinematicTrace trace = script_trace(init, 2, dt, 120);

    CheckResult out{"symmetric switch keeps the center continuous", false, ""};
    if (trace.events.size() != 1) {
        out.detail = "expected exactly one switch, saw " + std::to_string(trace.events.size());
        return out;
    }
    const SwitchEvent& ev = trace.events.front();
    if (!ev.symmetric || ev.removed != std::vector<AgentId>{1, 2} ||
        ev.added != std::vector<AgentId>{3, 4}) {
        out.detail = "switch was not the constructed symmetric swap";
        return out;
    }
    double worst_rate = 0.0;
    for (std::size_t s = 1; s < trace.snapshots.size(); ++s) {
        const double rate =
            (trace.snapshots[s].center_pos - trace.snapshots[s - 1].center_pos).norm() / dt;
        worst_rate = std::max(worst_rate, rate);
    }
    out.pass = worst_rate <= v_max + 1e-6;
    out.detail = "max |dc|/dt = " + fmt(worst_rate) + " vs bound " + fmt(v_max + 1e-6);
    return out;
}

CheckResult nonsymmetric_switch_check() {
    // Agent 2 overtakes agent 1 as the owner's nearest neighbor with a
    // lateral offset; the center must jump by the neighbor gap in one step,
    // and only there.
    std::vector<BoidState> init{
        {{0, 0}, {0, 0}}, {{1, 0}, {0, 0}}, {{2.5, 0.5}, {-1, 0}}};
    const double dt = 0.01;
    const double v_max = 1.0;
    KinematicTrace trace = script_trace(init, 1, dt, 250);

    CheckResult out{"non-symmetric switch jumps the center at the switch step", false, ""};
    if (trace.events.size() != 1 || trace.events.front().symmetric) {
        out.detail = "expected exactly one non-symmetric switch";
        return out;
    }
    const int switch_step = trace.switch_steps.front();
    const double bound = (v_max + 1e-6) * dt;
    int violating_step = -1;
    double worst = 0.0;
    bool multiple = false;
    for (std::size_t s = 1; s < trace.snapshots.size(); ++s) {
        const double jump =
            (trace.snapshots[s].center_pos - trace.snapshots[s - 1].center_pos).norm();
        if (jump > bound) {
            multiple = violating_step >= 0;
            violating_step = static_cast<int>(s);
            worst = std::max(worst, jump);
        }
    }
    out.pass = !multiple && violating_step == switch_step;
    out.detail = "jump " + fmt(worst) + " at step " + std::to_string(violating_step) +
                 ", switch at step " + std::to_string(switch_step);
    return out;
}

CheckResult boundary_exit_check() {
    // Owner rides the task boundary (|g| = 0 by construction, D equal to the
    // distance of its single neighbor) when a non-symmetric switch fires.
    // The residual's sampled rate must change discontinuously.
    std::vector<BoidState> init{
        {{0, 0}, {0, 0}}, {{1, 0}, {0, 0}}, {{2.5, 0.5}, {-1, 0}}};
    const double dt = 0.01;
    const double flock_radius = 1.0;
    KinematicTrace trace = script_trace(init, 1, dt, 250);

    CheckResult out{"a non-symmetric switch on the task boundary jumps the residual rate",
                    false, ""};
    if (trace.switch_steps.size() != 1) {
        out.detail = "expected exactly one switch";
        return out;
    }
    const int switch_step = trace.switch_steps.front();

    std::vector<double> g;
    g.reserve(trace.snapshots.size());
    Vec2 owner_pos{0, 0}; // owner rests at the origin
    for (const auto& snap : trace.snapshots) {
        g.push_back(task_residual(owner_pos, snap.center_pos, flock_radius));
    }
    // Pre-switch the owner sits exactly on the boundary.
    const double boundary_tol = 1e-9;
    for (int s = 0; s < switch_step; ++s) {
        if (std::fabs(g[s]) > boundary_tol) {
            out.detail = "owner left the boundary before the switch";
            return out;
        }
    }
    std::vector<double> rate(g.size() - 1);
    for (std::size_t s = 0; s + 1 < g.size(); ++s) rate[s] = (g[s + 1] - g[s]) / dt;
    double worst_other = 0.0;
    double at_switch = 0.0;
    for (std::size_t s = 1; s < rate.size(); ++s) {
        const double change = std::fabs(rate[s] - rate[s - 1]);
        if (static_cast<int>(s) == switch_step || static_cast<int>(s) == switch_step - 1) {
            at_switch = std::max(at_switch, change);
        } else {
            worst_other = std::max(worst_other, change);
        }
    }
    // Smooth-motion rate changes scale with dt; the switch is O(1).
    const double smooth_bound = 8.0 * dt + 1e-9;
    out.pass = worst_other <= smooth_bound && at_switch > 10.0 * smooth_bound;
    out.detail = "rate change " + fmt(at_switch) + " at switch vs " + fmt(worst_other) +
                 " elsewhere (smooth bound " + fmt(smooth_bound) + ")";
    return out;
}

// ---------------------------------------------------------------------------
// Oracle battery (planner vs. closed-form minimum-energy arcs).
// ---------------------------------------------------------------------------

FlockConfig oracle_config() {
    FlockConfig c;
    c.n_agents = 2;
    c.k = 1;
    c.body_radius = 0.1;
    c.flock_radius = 2.0;
    c.alpha = 1.0;
    c.v_max = 100.0;
    c.u_max = 200.0;
    c.horizon = 1.0;
    c.plan_steps = 100;
    c.sim_dt = 0.01;
    c.replan_interval = 0.5;
    c.total_time = 1.0;
    c.seed = 0;
    return c;
}

CheckResult pinned_case(const std::string& name, const BoidState& x0, const BoidState& xf,
                        double cost_floor = 1e-6) {
    const FlockConfig cfg = oracle_config();
    PlanProblem prob;
    prob.t0 = 0.0;
    prob.tf = 1.0;
    prob.x0 = x0;
    prob.pinned_terminal = xf;
    prob.config = cfg;

    PlanSolution sol = plan(prob);
    UnconstrainedArc arc = solve_bvp(x0, xf, 0.0, 1.0);

    const double dt = 1.0 / cfg.plan_steps;
    double linf = 0.0;
    for (int k = 0; k < cfg.plan_steps; ++k) {
        const Vec2 expected = arc.control_at((k + 0.5) * dt);
        linf = std::max(linf, (sol.trajectory.controls[k] - expected).norm());
    }
    const double analytic = arc.cost();
    const double gap = std::fabs(sol.cost - analytic) / std::max(analytic, cost_floor);

    CheckResult out;
    out.name = name;
    out.pass = sol.converged && linf <= 1e-3 * cfg.u_max && gap <= 0.01;
    out.detail = "Linf(u) = " + fmt(linf) + ", analytic cost = " + fmt(analytic) +
                 ", planner cost = " + fmt(sol.cost) + ", rel gap = " + fmt(gap);
    return out;
}

} // namespace

std::vector<CheckResult> oracle_battery() {
    std::vector<CheckResult> results;

    std::mt19937_64 rng(90210);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        BoidState x0{{unit(rng), unit(rng)}, {unit(rng), unit(rng)}};
        BoidState xf{{unit(rng), unit(rng)}, {unit(rng), unit(rng)}};
        char name[32];
        std::snprintf(name, sizeof name, "oracle case %02d", i);
        results.push_back(pinned_case(name, x0, xf));
    }

    CheckResult rest = pinned_case("oracle rest-to-rest", {{0, 0}, {0, 0}}, {{1, 0}, {0, 0}});
    // reproduce the reference cost explicitly in the detail line
    rest.detail += " (reference 6)";
    results.push_back(rest);

    // Ballistic target: both sides must report (numerically) zero cost.
    const BoidState x0{{0.2, -0.3}, {0.5, 0.25}};
    const BoidState xf{{0.7, -0.05}, {0.5, 0.25}};
    results.push_back(pinned_case("oracle ballistic", x0, xf));
    return results;
}

ScenarioSpec consensus_scenario(long long seed) {
    ScenarioSpec spec;
    spec.config.n_agents = 5;
    spec.config.k = 4;
    spec.config.body_radius = 0.1;
    spec.config.flock_radius = 2.0;
    spec.config.alpha = 1.0;
    spec.config.v_max = 2.0;
    spec.config.u_max = 8.0;
    spec.config.horizon = 4.0;
    spec.config.plan_steps = 80;
    spec.config.sim_dt = 0.05;
    spec.config.replan_interval = 0.25;
    spec.config.total_time = 50.0;
    spec.config.seed = seed;
    spec.topology_mode = TopologyMode::Fixed;
    spec.placement.mode = PlacementMode::UniformDisk;
    // Spawn gaps wide enough that no admissible velocity draw can close them
    // faster than control authority can react.
    spec.placement.radius = 1.2;
    spec.placement.min_separation = 0.6;
    spec.placement.speed_max = 1.0;
    return spec;
}

ScenarioSpec consensus_hold_scenario() {
    ScenarioSpec spec;
    spec.config.n_agents = 4;
    spec.config.k = 3;
    spec.config.body_radius = 0.1;
    spec.config.flock_radius = 2.0;
    spec.config.alpha = 1.0;
    spec.config.v_max = 2.0;
    spec.config.u_max = 4.0;
    spec.config.horizon = 2.0;
    spec.config.plan_steps = 40;
    spec.config.sim_dt = 0.05;
    spec.config.replan_interval = 0.25;
    spec.config.total_time = 10.0;
    spec.config.seed = 3;
    spec.topology_mode = TopologyMode::DynamicKnn;
    spec.placement.mode = PlacementMode::Explicit;
    const Vec2 consensus_velocity{1.0, 0.0};
    spec.initial_states = {
        {{-0.5, -0.5}, consensus_velocity},
        {{0.5, -0.5}, consensus_velocity},
        {{-0.5, 0.5}, consensus_velocity},
        {{0.5, 0.5}, consensus_velocity},
    };
    return spec;
}

ScenarioSpec slack_tradeoff_scenario(double alpha) {
    ScenarioSpec spec;
    spec.config.n_agents = 6;
    spec.config.k = 2;
    spec.config.body_radius = 0.05;
    spec.config.flock_radius = 0.8;
    spec.config.alpha = alpha;
    spec.config.v_max = 2.0;
    spec.config.u_max = 6.0;
    spec.config.horizon = 1.5;
    spec.config.plan_steps = 30;
    spec.config.sim_dt = 0.05;
    spec.config.replan_interval = 0.25;
    // Short runs keep the three alpha sweeps comparable per agent; longer
    // horizons let trajectory divergence reshuffle who carries the slack.
    spec.config.total_time = 5.0;
    spec.config.seed = 20;
    spec.topology_mode = TopologyMode::DynamicKnn;
    spec.placement.mode = PlacementMode::UniformDisk;
    spec.placement.radius = 1.0;
    spec.placement.speed_max = 1.0;
    return spec;
}

namespace {

CheckResult consensus_criterion(const std::vector<SimulationLog>& logs, double seconds) {
    CheckResult out{"criterion 2: fixed-topology velocity consensus", true, ""};
    std::ostringstream detail;
    for (std::size_t run_idx = 0; run_idx < logs.size(); ++run_idx) {
        const std::vector<double> series = disagreement_series(logs[run_idx]);
        const double final_disagreement = series.back();

        const int windows = 10;
        const int per_window = static_cast<int>(series.size()) / windows;
        double prev = std::numeric_limits<double>::infinity();
        bool monotone = true;
        for (int w = 0; w < windows; ++w) {
            double peak = 0.0;
            const int begin = w * per_window;
            const int end = w + 1 == windows ? static_cast<int>(series.size())
                                             : (w + 1) * per_window;
            for (int s = begin; s < end; ++s) peak = std::max(peak, series[s]);
            if (peak > prev + 1e-9) monotone = false;
            prev = peak;
        }
        const bool ok = monotone && final_disagreement < 1e-2;
        out.pass = out.pass && ok;
        detail << "seed " << logs[run_idx].config.seed << ": final = "
               << fmt(final_disagreement) << (monotone ? "" : " (not monotone)") << "; ";
    }
    out.pass = out.pass && seconds < 300.0;
    detail << "runtime " << fmt(seconds) << "s";
    out.detail = detail.str();
    return out;
}

CheckResult consensus_hold_criterion(const SimulationLog& log) {
    const double max_u = max_applied_control(log);
    double min_margin = std::numeric_limits<double>::infinity();
    double max_g = -std::numeric_limits<double>::infinity();
    for (const auto& summary : log.constraint_history) {
        min_margin = std::min(min_margin, summary.min_safety_margin);
        max_g = std::max(max_g, summary.max_task_residual);
    }
    bool persists = true;
    for (const auto& states : log.states) {
        persists = persists && detect_consensus(states, 1e-6);
    }
    CheckResult out{"criterion 3: consensus is maintained with zero control", false, ""};
    out.pass = max_u <= 1e-6 && min_margin >= 0.0 && max_g <= 0.0 && persists;
    out.detail = "max ||u|| = " + fmt(max_u) + ", min margin = " + fmt(min_margin) +
                 ", max g = " + fmt(max_g) +
                 (persists ? ", consensus persists" : ", consensus lost");
    return out;
}

CheckResult hard_safety_criterion(const std::vector<const SimulationLog*>& logs) {
    CheckResult out{"criterion 4: hard safety across all acceptance runs", true, ""};
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (const SimulationLog* log : logs) {
        const double contact = 2.0 * log->config.body_radius;
        const double ratio = min_pairwise_distance(*log) / contact;
        worst_ratio = std::min(worst_ratio, ratio);
        out.pass = out.pass && ratio >= 1.0 - 1e-6 && log->safety_failures.empty();
    }
    out.detail = "worst min-distance / 2R = " + fmt(worst_ratio) + " over " +
                 std::to_string(logs.size()) + " runs";
    return out;
}

CheckResult continuity_criterion(const std::vector<SimulationLog>& logs) {
    CheckResult out{"criterion 5: realized controls pass the continuity check", true, ""};
    std::ostringstream detail;
    for (const SimulationLog& log : logs) {
        const RunReport report = make_report(log);
        out.pass = out.pass && report.control_continuity_ok;
        detail << "seed " << log.config.seed << ": "
               << (report.control_continuity_ok ? "ok" : "violated") << "; ";
    }
    out.detail = detail.str();
    return out;
}

CheckResult diameter_criterion(const std::vector<SimulationLog>& logs) {
    CheckResult out{"criterion 7: post-consensus flock diameter within N*D", true, ""};
    std::ostringstream detail;
    for (const SimulationLog& log : logs) {
        const RunReport report = make_report(log);
        const double bound = report.diameter_bound + 1e-3;
        // When strict consensus is never declared, check the settled state
        // (trailing fifth of the run) rather than passing vacuously.
        int start = log.n_times() - std::max(1, log.n_times() / 5);
        bool fallback = true;
        if (report.consensus_time) {
            fallback = false;
            for (int ti = 0; ti < log.n_times(); ++ti) {
                if (log.times[ti] >= *report.consensus_time) {
                    start = ti;
                    break;
                }
            }
        }
        double worst = 0.0;
        for (int ti = start; ti < log.n_times(); ++ti) {
            worst = std::max(worst, flock_diameter(log.states[ti]));
        }
        out.pass = out.pass && worst <= bound;
        detail << "seed " << log.config.seed << ": diameter " << fmt(worst) << " vs "
               << fmt(bound) << (fallback ? " (trailing window; no strict consensus)" : "")
               << "; ";
    }
    out.detail = detail.str();
    return out;
}

struct SlackSweep {
    std::vector<SimulationLog> logs; // alpha = 0.1, 1, 10
    CheckResult result;
};

SlackSweep slack_criterion() {
    SlackSweep sweep;
    const double alphas[] = {0.1, 1.0, 10.0};
    std::vector<std::vector<double>> per_agent;
    for (double alpha : alphas) {
        sweep.logs.push_back(run(slack_tradeoff_scenario(alpha)));
        per_agent.push_back(make_report(sweep.logs.back()).integrated_slack);
    }
    CheckResult out{"criterion 8: per-agent integrated slack non-increasing in alpha",
                    true, ""};
    double max_slack_low_alpha = 0.0;
    for (double s : per_agent[0]) max_slack_low_alpha = std::max(max_slack_low_alpha, s);
    if (max_slack_low_alpha <= 0.0) {
        out.pass = false;
        out.detail = "scenario produced no slack; sweep is vacuous";
        sweep.result = out;
        return sweep;
    }
    std::ostringstream detail;
    for (std::size_t i = 0; i < per_agent[0].size(); ++i) {
        for (int a = 0; a + 1 < 3; ++a) {
            const double lo = per_agent[a][i];
            const double hi = per_agent[a + 1][i];
            if (hi > lo + 1e-9 + 1e-6 * lo) out.pass = false;
        }
        detail << "agent " << i << ": " << fmt(per_agent[0][i]) << " / "
               << fmt(per_agent[1][i]) << " / " << fmt(per_agent[2][i]) << "; ";
    }
    out.detail = detail.str();
    sweep.result = out;
    return sweep;
}

CheckResult determinism_criterion(const SimulationLog& reference) {
    ScenarioSpec spec = slack_tradeoff_scenario(1.0);
    const SimulationLog rerun = run(spec);
    const std::string csv_a = trajectory_csv(reference);
    const std::string csv_b = trajectory_csv(rerun);
    const std::string events_a = event_log_text(reference);
    const std::string events_b = event_log_text(rerun);
    CheckResult out{"criterion 9: identical seeds give byte-identical outputs", false, ""};
    out.pass = csv_a == csv_b && events_a == events_b;
    out.detail = out.pass ? "CSV and event log byte-identical"
                          : "outputs differ between identical runs";
    return out;
}

CheckResult oracle_criterion() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<CheckResult> cases = oracle_battery();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CheckResult out{"criterion 1: planner matches the analytic minimum-energy arcs", true,
                    ""};
    int failed = 0;
    for (const CheckResult& c : cases) {
        if (!c.pass) ++failed;
    }
    out.pass = failed == 0 && seconds < 60.0;
    out.detail = std::to_string(cases.size()) + " cases, " + std::to_string(failed) +
                 " failed, runtime " + fmt(seconds) + "s";
    return out;
}

CheckResult headon_safety_check() {
    FlockConfig cfg;
    cfg.n_agents = 2;
    cfg.k = 1;
    cfg.body_radius = 0.1;
    cfg.flock_radius = 5.0;
    cfg.alpha = 1.0;
    cfg.v_max = 2.0;
    cfg.u_max = 5.0;
    cfg.horizon = 1.0;
    cfg.plan_steps = 50;
    cfg.sim_dt = 0.02;
    cfg.replan_interval = 0.25;
    cfg.total_time = 1.0;

    PlanProblem prob;
    prob.t0 = 0.0;
    prob.tf = 1.0;
    prob.x0 = {{0, 0}, {0.5, 0}};
    prob.config = cfg;
    prob.neighbor_trajectories.emplace(
        1, make_trajectory({{0.41, 0}, {-0.5, 0}}, 0.0, 1.0 / cfg.plan_steps,
                           std::vector<Vec2>(cfg.plan_steps, Vec2{})));
    PlanSolution sol = plan(prob);

    CheckResult out{"head-on planning keeps the pair separated", false, ""};
    out.pass = sol.converged && sol.max_safety_violation <= hard_safety_tol(cfg.body_radius);
    out.detail = "knot violation = " + fmt(sol.max_safety_violation) + ", cost = " +
                 fmt(sol.cost);
    return out;
}

CheckResult center_speed_check(const SimulationLog& log) {
    // Between switches the neighborhood center cannot outrun the speed bound
    // (plus the one-step control contribution).
    const double dt = log.config.sim_dt;
    const double bound =
        (log.config.v_max + 0.5 * log.config.u_max * dt + 1e-6) * dt;
    CheckResult out{"neighborhood centers move within the speed bound", true, ""};
    double worst = 0.0;
    for (int ti = 1; ti < log.n_times(); ++ti) {
        for (int i = 0; i < log.n_agents(); ++i) {
            if (log.memberships[ti][i] != log.memberships[ti - 1][i]) continue;
            auto [c_now, cv_now] = center(log.states[ti], log.memberships[ti][i]);
            auto [c_prev, cv_prev] = center(log.states[ti - 1], log.memberships[ti - 1][i]);
            (void)cv_now;
            (void)cv_prev;
            worst = std::max(worst, (c_now - c_prev).norm());
        }
    }
    out.pass = worst <= bound;
    out.detail = "max |dc| = " + fmt(worst) + " vs bound " + fmt(bound);
    return out;
}

} // namespace

std::vector<CheckResult> acceptance_criteria() {
    std::vector<CheckResult> results;

    // 1: oracle battery
    results.push_back(oracle_criterion());

    // 2/5/7 share the five fixed-topology consensus runs.
    const auto consensus_start = std::chrono::steady_clock::now();
    std::vector<SimulationLog> consensus_logs;
    for (long long seed = 1; seed <= 5; ++seed) {
        consensus_logs.push_back(run(consensus_scenario(seed)));
    }
    const double consensus_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - consensus_start)
            .count();
    results.push_back(consensus_criterion(consensus_logs, consensus_seconds));

    // 3: zero-control consensus hold
    const SimulationLog consensus_hold_log = run(consensus_hold_scenario());
    results.push_back(consensus_hold_criterion(consensus_hold_log));

    // 8 runs the slack sweep; its logs also feed 4 and 9.
    SlackSweep sweep = slack_criterion();

    // 4: hard safety across every run above
    std::vector<const SimulationLog*> all_logs;
    for (const auto& log : consensus_logs) all_logs.push_back(&log);
    all_logs.push_back(&consensus_hold_log);
    for (const auto& log : sweep.logs) all_logs.push_back(&log);
    results.push_back(hard_safety_criterion(all_logs));

    // 5/6/7
    results.push_back(continuity_criterion(consensus_logs));
    {
        CheckResult sym = symmetric_switch_check();
        CheckResult nonsym = nonsymmetric_switch_check();
        CheckResult boundary = boundary_exit_check();
        CheckResult out{"criterion 6: constructed switch scenarios", true, ""};
        out.pass = sym.pass && nonsym.pass && boundary.pass;
        out.detail = sym.detail + " | " + nonsym.detail + " | " + boundary.detail;
        results.push_back(out);
    }
    results.push_back(diameter_criterion(consensus_logs));

    // 8 and 9
    results.push_back(sweep.result);
    results.push_back(determinism_criterion(sweep.logs[1]));

    // Present in criterion order 1..9.
    std::vector<CheckResult> ordered;
    ordered.push_back(results[0]); // 1
    ordered.push_back(results[1]); // 2
    ordered.push_back(results[2]); // 3
    ordered.push_back(results[3]); // 4
    ordered.push_back(results[4]); // 5
    ordered.push_back(results[5]); // 6
    ordered.push_back(results[6]); // 7
    ordered.push_back(results[7]); // 8
    ordered.push_back(results[8]); // 9
    return ordered;
}

std::vector<CheckResult> verify_suite(const std::string& suite) {
    std::vector<CheckResult> results;
    const bool all = suite == "all";
    if (suite == "continuity" || all) {
        const SimulationLog log = run(consensus_scenario(1));
        const RunReport report = make_report(log);
        CheckResult control{"fixed-topology controls pass the continuity check",
                            report.control_continuity_ok, ""};
        results.push_back(control);
        results.push_back(center_speed_check(log));
    }
    if (suite == "switch" || all) {
        results.push_back(symmetric_switch_check());
        results.push_back(nonsymmetric_switch_check());
        results.push_back(boundary_exit_check());
    }
    if (suite == "consensus" || all) {
        const SimulationLog log = run(consensus_scenario(1));
        const RunReport report = make_report(log);
        CheckResult consensus{"velocity disagreement converges under fixed topology",
                              report.final_velocity_disagreement < 1e-2,
                              "final = " + fmt(report.final_velocity_disagreement)};
        results.push_back(consensus);
        results.push_back(consensus_hold_criterion(run(consensus_hold_scenario())));
    }
    if (suite == "safety" || all) {
        results.push_back(headon_safety_check());
        const SimulationLog log = run(slack_tradeoff_scenario(1.0));
        std::vector<const SimulationLog*> logs{&log};
        CheckResult dynamic = hard_safety_criterion(logs);
        dynamic.name = "dynamic-topology run keeps hard safety";
        results.push_back(dynamic);
    }
    if (suite == "diameter" || all) {
        std::vector<SimulationLog> logs;
        logs.push_back(run(consensus_scenario(2)));
        CheckResult diameter = diameter_criterion(logs);
        diameter.name = "post-consensus diameter within N*D";
        results.push_back(diameter);
    }
    if (results.empty()) {
        throw ValidationError("suite", "unknown verify suite '" + suite +
                                           "' (continuity, switch, consensus, safety, "
                                           "diameter, all)");
    }
    return results;
}

} // namespace flock
