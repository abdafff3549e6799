#include "flock/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "flock/constraints.hpp"

namespace flock {

void TrajectoryRegistry::commit(AgentId agent, Trajectory trajectory) {
    plans_.at(agent) = std::move(trajectory);
}

Trajectory TrajectoryRegistry::committed_or_ballistic(AgentId agent,
                                                      const BoidState& current, double t0,
                                                      double horizon, int steps) const {
    const auto& stored = plans_.at(agent);
    if (stored.has_value()) return *stored;
    return make_trajectory(current, t0, horizon / steps, std::vector<Vec2>(steps, Vec2{}));
}

void commit_plan(AgentId agent, const PlanSolution& solution,
                 TrajectoryRegistry& registry) {
    registry.commit(agent, solution.trajectory);
}

bool detect_consensus(std::span<const BoidState> states, double tol) {
    if (states.size() < 2) throw std::logic_error("detect_consensus: need at least 2 agents");
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            if ((states[i].velocity - states[j].velocity).norm() > tol) return false;
        }
    }
    return true;
}

namespace {

bool far_enough(const std::vector<Vec2>& placed, const Vec2& candidate, double min_dist) {
    for (const Vec2& p : placed) {
        if ((candidate - p).norm() <= min_dist) return false;
    }
    return true;
}

std::vector<BoidState> generate_disk(const FlockConfig& cfg, const PlacementSpec& place,
                                     std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double min_dist = std::max(2.0 * cfg.body_radius, place.min_separation);
    std::vector<Vec2> positions;
    positions.reserve(cfg.n_agents);
    for (int i = 0; i < cfg.n_agents; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            const double radius = place.radius * std::sqrt(unit(rng));
            const double angle = 2.0 * M_PI * unit(rng);
            const Vec2 candidate{radius * std::cos(angle), radius * std::sin(angle)};
            if (far_enough(positions, candidate, min_dist)) {
                positions.push_back(candidate);
                placed = true;
            }
        }
        if (!placed) {
            throw ValidationError("placement",
                                  "could not draw non-overlapping positions in 1000 attempts");
        }
    }
    std::vector<BoidState> states(cfg.n_agents);
    for (int i = 0; i < cfg.n_agents; ++i) {
        states[i].position = positions[i];
        if (place.speed_max > 0.0) {
            const double speed = place.speed_max * unit(rng);
            const double angle = 2.0 * M_PI * unit(rng);
            states[i].velocity = {speed * std::cos(angle), speed * std::sin(angle)};
        }
    }
    return states;
}

std::vector<BoidState> generate_grid(const FlockConfig& cfg, const PlacementSpec& place,
                                     std::mt19937_64& rng) {
    if (place.spacing <= 2.0 * cfg.body_radius) {
        throw ValidationError("placement", "grid spacing must exceed twice body_radius");
    }
    const int columns = place.columns > 0
                            ? place.columns
                            : static_cast<int>(std::ceil(std::sqrt(cfg.n_agents)));
    const int rows = (cfg.n_agents + columns - 1) / columns;
    const double x_offset = 0.5 * (columns - 1) * place.spacing;
    const double y_offset = 0.5 * (rows - 1) * place.spacing;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<BoidState> states(cfg.n_agents);
    for (int i = 0; i < cfg.n_agents; ++i) {
        const int row = i / columns;
        const int col = i % columns;
        states[i].position = {col * place.spacing - x_offset, row * place.spacing - y_offset};
        if (place.speed_max > 0.0) {
            const double speed = place.speed_max * unit(rng);
            const double angle = 2.0 * M_PI * unit(rng);
            states[i].velocity = {speed * std::cos(angle), speed * std::sin(angle)};
        }
    }
    return states;
}

FlockConfig effective_config(const ScenarioSpec& spec, AgentId agent) {
    FlockConfig cfg = spec.config;
    const auto it = spec.overrides.find(agent);
    if (it != spec.overrides.end()) {
        if (it->second.alpha) cfg.alpha = *it->second.alpha;
        if (it->second.v_max) cfg.v_max = *it->second.v_max;
        if (it->second.u_max) cfg.u_max = *it->second.u_max;
    }
    return cfg;
}

} // namespace

std::vector<BoidState> generate_initial_states(const ScenarioSpec& spec) {
    const FlockConfig& cfg = spec.config;
    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.seed));
    switch (spec.placement.mode) {
    case PlacementMode::UniformDisk:
        return generate_disk(cfg, spec.placement, rng);
    case PlacementMode::Grid:
        return generate_grid(cfg, spec.placement, rng);
    case PlacementMode::Explicit:
        if (static_cast<int>(spec.initial_states.size()) != cfg.n_agents) {
            throw ValidationError("initial_states",
                                  "explicit state count must equal n_agents");
        }
        for (const BoidState& s : spec.initial_states) {
            if (!s.is_finite()) {
                throw ValidationError("initial_states", "states must be finite");
            }
        }
        return spec.initial_states;
    }
    throw std::logic_error("generate_initial_states: unknown placement mode");
}

bool knn_graph_connected(std::span<const Vec2> positions, int k) {
    const int n = static_cast<int>(positions.size());
    std::vector<std::set<int>> adjacency(n);
    for (AgentId i = 0; i < positions.size(); ++i) {
        for (AgentId j : knn(positions, i, k)) {
            adjacency[i].insert(static_cast<int>(j));
            adjacency[j].insert(static_cast<int>(i)); // undirected closure
        }
    }
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int visited = 1;
    while (!stack.empty()) {
        const int at = stack.back();
        stack.pop_back();
        for (int next : adjacency[at]) {
            if (!seen[next]) {
                seen[next] = true;
                ++visited;
                stack.push_back(next);
            }
        }
    }
    return visited == n;
}

SimulationLog run(const ScenarioSpec& spec) {
    const FlockConfig& cfg = spec.config;
    validate(cfg);

    const int n = cfg.n_agents;
    const int n_steps = static_cast<int>(std::llround(cfg.total_time / cfg.sim_dt));
    const double tol_hard = hard_safety_tol(cfg.body_radius);

    std::vector<BoidState> current = generate_initial_states(spec);

    std::vector<std::vector<AgentId>> frozen_members;
    if (spec.topology_mode == TopologyMode::Fixed) {
        std::vector<Vec2> positions(n);
        for (int i = 0; i < n; ++i) positions[i] = current[i].position;
        if (!knn_graph_connected(positions, cfg.k)) {
            throw ValidationError("topology_mode",
                                  "fixed topology requires a connected t=0 k-NN graph");
        }
        frozen_members.resize(n);
        for (AgentId i = 0; i < static_cast<AgentId>(n); ++i) {
            frozen_members[i] = knn(positions, i, cfg.k);
        }
    }

    SimulationLog log;
    log.config = cfg;
    log.topology_mode = spec.topology_mode;
    log.times.reserve(n_steps + 1);
    log.states.reserve(n_steps + 1);

    TrajectoryRegistry registry(n);
    std::vector<Vec2> last_controls(n);
    std::vector<double> next_replan(n, 0.0);
    std::vector<NeighborhoodSnapshot> prev_snapshots;

    for (int ti = 0; ti <= n_steps; ++ti) {
        const double t = ti * cfg.sim_dt;
        const bool final_row = ti == n_steps;

        // Neighborhood snapshots for this instant.
        std::vector<NeighborhoodSnapshot> snapshots(n);
        for (AgentId i = 0; i < static_cast<AgentId>(n); ++i) {
            if (spec.topology_mode == TopologyMode::Fixed) {
                NeighborhoodSnapshot snap;
                snap.owner = i;
                snap.members = frozen_members[i];
                std::tie(snap.center_pos, snap.center_vel) = center(current, snap.members);
                Vec2 acc;
                for (AgentId j : snap.members) acc += last_controls[j];
                snap.center_acc = acc / static_cast<double>(snap.members.size());
                snapshots[i] = std::move(snap);
            } else {
                snapshots[i] = make_snapshot(current, last_controls, i, cfg.k);
            }
        }

        // Switch events against the previous instant, replan trigger set.
        std::vector<std::pair<AgentId, ReplanCause>> to_replan;
        if (!prev_snapshots.empty()) {
            for (AgentId i = 0; i < static_cast<AgentId>(n); ++i) {
                auto event = detect_switch(prev_snapshots[i], snapshots[i], t);
                if (event) {
                    event->symmetric = is_symmetric_switch(*event, current);
                    log.switch_events.push_back(*event);
                    if (!final_row) to_replan.emplace_back(i, ReplanCause::Switch);
                }
            }
        }
        if (!final_row) {
            for (AgentId i = 0; i < static_cast<AgentId>(n); ++i) {
                const bool already =
                    std::any_of(to_replan.begin(), to_replan.end(),
                                [i](const auto& e) { return e.first == i; });
                if (!already && t >= next_replan[i] - 1e-9 * cfg.sim_dt) {
                    to_replan.emplace_back(i, ti == 0 ? ReplanCause::Initial
                                                      : ReplanCause::Periodic);
                }
            }
            std::sort(to_replan.begin(), to_replan.end());

            // Sequential planning in priority (ascending id) order; each
            // agent reads plans committed earlier in this same step.
            for (const auto& [i, cause] : to_replan) {
                PlanProblem problem;
                problem.agent = i;
                problem.t0 = t;
                problem.tf = t + cfg.horizon;
                problem.x0 = current[i];
                problem.config = effective_config(spec, i);
                for (AgentId j : snapshots[i].members) {
                    problem.neighbor_trajectories.emplace(
                        j, registry.committed_or_ballistic(j, current[j], t, cfg.horizon,
                                                           cfg.plan_steps));
                }
                std::optional<Trajectory> warm;
                if (registry.has(i)) {
                    warm = registry.committed_or_ballistic(i, current[i], t, cfg.horizon,
                                                           cfg.plan_steps);
                }
                PlanSolution solution = plan(problem, warm);
                log.replan_events.push_back({t, i, cause, solution.converged});
                if (solution.converged || !registry.has(i)) {
                    // A non-converged first plan is still committed: some
                    // committed trajectory must exist for neighbors to read.
                    commit_plan(i, solution, registry);
                }
                next_replan[i] = t + cfg.replan_interval;
            }
        }

        // Controls for this step come from the committed plans.
        std::vector<Vec2> controls(n);
        std::vector<double> slacks(n, 0.0);
        if (!final_row) {
            for (AgentId i = 0; i < static_cast<AgentId>(n); ++i) {
                const Trajectory committed = registry.committed_or_ballistic(
                    i, current[i], t, cfg.horizon, cfg.plan_steps);
                controls[i] = committed.control_at(t);
                slacks[i] = committed.slack_at(t);
            }
        }

        // Log this instant.
        log.times.push_back(t);
        log.states.push_back(current);
        log.applied_controls.push_back(controls);
        std::vector<Vec2> centers(n);
        std::vector<std::vector<AgentId>> members_row(n);
        for (AgentId i = 0; i < static_cast<AgentId>(n); ++i) {
            centers[i] = snapshots[i].center_pos;
            members_row[i] = snapshots[i].members;
        }
        const ConstraintReport report = make_constraint_report(
            current, centers, slacks, cfg.body_radius, cfg.flock_radius);

        std::vector<double> g_row(n), safety_row(n, std::numeric_limits<double>::infinity());
        for (AgentId i = 0; i < static_cast<AgentId>(n); ++i) {
            g_row[i] = report.task_residuals.at(i);
            for (AgentId j = 0; j < static_cast<AgentId>(n); ++j) {
                if (j == i) continue;
                safety_row[i] = std::min(safety_row[i], report.safety_margins.at({i, j}));
            }
        }
        for (AgentId i = 0; i < static_cast<AgentId>(n); ++i) {
            for (AgentId j = i + 1; j < static_cast<AgentId>(n); ++j) {
                const double margin = report.safety_margins.at({i, j});
                if (margin < -tol_hard) {
                    log.safety_failures.push_back({t, i, j, margin});
                }
            }
        }
        log.constraint_history.push_back({report.min_safety_margin(),
                                          report.max_task_residual(),
                                          report.max_slack()});
        log.memberships.push_back(std::move(members_row));
        log.task_residuals.push_back(std::move(g_row));
        log.slack_values.push_back(slacks);
        log.min_safety_margins.push_back(std::move(safety_row));

        if (final_row) break;

        // Advance every agent by one exact step.
        for (AgentId i = 0; i < static_cast<AgentId>(n); ++i) {
            current[i] = integrate_step(current[i], controls[i], cfg.sim_dt);
        }
        last_controls = controls;
        prev_snapshots = std::move(snapshots);
    }
    return log;
}

} // namespace flock
