#pragma once
/**
 * @file planner.hpp
 * @brief Finite-horizon energy-minimal trajectory solver for one agent.
 *
 * Direct transcription with M knots and piecewise-constant control.
 * Decision variables are the knot controls; slack values are recovered in
 * closed form from the task residuals. The solve is a sequential
 * convexification loop: the pairwise minimum-separation constraints are the
 * only nonconvex part, and their linearization about the current iterate is
 * an inner approximation (the linearized constraint implies the true one),
 * so every accepted iterate is safe against the supplied neighbor plans at
 * the knot times. Each convex subproblem is solved by an augmented
 * Lagrangian over an accelerated projected-gradient inner loop; the only
 * projections are onto the control-norm ball and the slack nonnegativity
 * cone.
 */

#include <map>
#include <optional>

#include "flock/core.hpp"
#include "flock/trajectory.hpp"

namespace flock {

/// One agent's planning instance. Neighbor plans are fixed data; they are
/// sampled ballistically past their end when shorter than [t0, tf].
struct PlanProblem {
    AgentId agent = 0;
    double t0 = 0.0;
    double tf = 0.0;
    BoidState x0;
    std::map<AgentId, Trajectory> neighbor_trajectories;
    FlockConfig config;

    /// Test-harness hook: pins the terminal state for oracle comparisons.
    /// Normal operation leaves the terminal free.
    std::optional<BoidState> pinned_terminal;
};

struct PlanSolution {
    Trajectory trajectory;
    double cost = 0.0;               ///< 1/2 sum (||u||^2 + alpha*eta^2) dt
    int iterations = 0;              ///< convexification iterations used
    bool converged = false;
    double max_safety_violation = 0.0; ///< max(0, 4R^2 - ||p_i - p_j||^2) over knots
};

/**
 * @brief Solves the agent's planning problem.
 *
 * Returns a dynamically feasible trajectory from x0. Safety against every
 * neighbor trajectory is hard; the task constraint is relaxed through the
 * slack values, so an instance is only reported non-converged when safety
 * or the bounds cannot be met (the solution then carries the residual
 * violation, never a fabricated feasible claim).
 */
PlanSolution plan(const PlanProblem& problem,
                  const std::optional<Trajectory>& warm_start = std::nullopt);

/// Discretized objective of a trajectory: 1/2 sum_k (||u_k||^2 + alpha*slack_k) dt.
double evaluate_objective(const Trajectory& trajectory, double alpha);

} // namespace flock
