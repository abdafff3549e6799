#pragma once
/**
 * @file simulator.hpp
 * @brief Time-stepped execution: neighborhood maintenance, switch-triggered
 *        and periodic replanning under a priority ordering, control
 *        application and logging.
 *
 * The step loop is sequential and deterministic. Agents replan in ascending
 * id order, each reading the latest committed trajectories of its current
 * neighbors, so two identical scenario specs (including the seed) produce
 * bit-identical logs.
 */

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "flock/core.hpp"
#include "flock/neighborhood.hpp"
#include "flock/planner.hpp"
#include "flock/trajectory.hpp"

namespace flock {

enum class TopologyMode { DynamicKnn, Fixed };
enum class PlacementMode { UniformDisk, Grid, Explicit };
enum class ReplanCause { Initial, Periodic, Switch };

struct PlacementSpec {
    PlacementMode mode = PlacementMode::UniformDisk;
    double radius = 1.0;        ///< disk radius (uniform-disk)
    double spacing = 1.0;       ///< lattice spacing (grid)
    int columns = 0;            ///< grid columns; 0 picks a near-square layout
    double speed_max = 0.0;     ///< initial speeds drawn from [0, speed_max]
    double min_separation = 0.0; ///< spawn gap; the generator always enforces > 2R
};

/// Optional per-agent parameter overrides (scenario-file `[overrides]`).
struct AgentOverride {
    std::optional<double> alpha;
    std::optional<double> v_max;
    std::optional<double> u_max;
};

struct ScenarioSpec {
    FlockConfig config;
    TopologyMode topology_mode = TopologyMode::DynamicKnn;
    PlacementSpec placement;
    std::vector<BoidState> initial_states; ///< used when placement.mode == Explicit
    std::map<AgentId, AgentOverride> overrides;
};

struct ReplanEvent {
    double time = 0.0;
    AgentId agent = 0;
    ReplanCause cause = ReplanCause::Initial;
    bool converged = true;
};

/// A realized hard-safety violation; never silently ignored.
struct SafetyFailure {
    double time = 0.0;
    AgentId a = 0;
    AgentId b = 0;
    double margin = 0.0;
};

struct ConstraintSummary {
    double min_safety_margin = 0.0;
    double max_task_residual = 0.0;
    double max_slack = 0.0;
};

/// Full time history of one run.
struct SimulationLog {
    FlockConfig config;
    TopologyMode topology_mode = TopologyMode::DynamicKnn;
    std::vector<double> times;                              ///< uniform sim_dt grid
    std::vector<std::vector<BoidState>> states;             ///< per time, per agent
    std::vector<std::vector<Vec2>> applied_controls;        ///< last row is zero
    std::vector<std::vector<std::vector<AgentId>>> memberships;
    std::vector<std::vector<double>> task_residuals;        ///< per time, per agent
    std::vector<std::vector<double>> slack_values;          ///< committed eta^2 at t
    std::vector<std::vector<double>> min_safety_margins;    ///< per time, per agent
    std::vector<SwitchEvent> switch_events;
    std::vector<ReplanEvent> replan_events;
    std::vector<ConstraintSummary> constraint_history;
    std::vector<SafetyFailure> safety_failures;

    int n_agents() const { return config.n_agents; }
    int n_times() const { return static_cast<int>(times.size()); }
};

/**
 * @brief Committed-trajectory store read by later planners in the priority
 *        order. Reads before any commit fall back to a ballistic hold of the
 *        agent's current state.
 */
class TrajectoryRegistry {
public:
    explicit TrajectoryRegistry(int n_agents) : plans_(n_agents) {}

    void commit(AgentId agent, Trajectory trajectory);
    bool has(AgentId agent) const { return plans_.at(agent).has_value(); }

    /// Latest committed plan, or a ballistic hold over [t0, t0+horizon]
    /// built from `current` when nothing has been committed.
    Trajectory committed_or_ballistic(AgentId agent, const BoidState& current, double t0,
                                      double horizon, int steps) const;

private:
    std::vector<std::optional<Trajectory>> plans_;
};

/// Registers a freshly solved plan so later readers in the same step see it.
void commit_plan(AgentId agent, const PlanSolution& solution, TrajectoryRegistry& registry);

/// True iff the largest pairwise velocity difference is within tol.
bool detect_consensus(std::span<const BoidState> states, double tol);

/// Draws (or validates) the initial states for a scenario. Generated
/// placements always satisfy pairwise distance > 2R; explicit states are
/// taken as given and any violation surfaces through the run's safety log.
std::vector<BoidState> generate_initial_states(const ScenarioSpec& spec);

/// Frozen-topology prerequisite: the undirected closure of the t=0 k-NN
/// graph must be connected.
bool knn_graph_connected(std::span<const Vec2> positions, int k);

/// Runs the scenario to completion. Deterministic given the spec.
SimulationLog run(const ScenarioSpec& spec);

} // namespace flock
