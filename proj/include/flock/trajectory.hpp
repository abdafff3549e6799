#pragma once
/**
 * @file trajectory.hpp
 * @brief Time-indexed plan: sampled states, piecewise-constant controls and
 *        per-knot slack values over a horizon.
 *
 * The state sequence always satisfies the exact discrete recurrence
 * states[k+1] = integrate_step(states[k], controls[k], dt). Queries past the
 * end of the plan extend it ballistically (zero control), which is also the
 * defined fallback when a neighbor's committed plan is shorter than the
 * querying agent's horizon.
 */

#include <vector>

#include "flock/core.hpp"

namespace flock {

struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;                ///< horizon / knot count
    std::vector<BoidState> states;  ///< size M+1
    std::vector<Vec2> controls;     ///< size M
    std::vector<double> slacks;     ///< size M, eta^2 per knot interval

    int steps() const { return static_cast<int>(controls.size()); }
    double end_time() const { return t0 + dt * steps(); }

    /// Control applied at absolute time t (zero beyond the last knot).
    Vec2 control_at(double t) const;

    /// Slack value at absolute time t (zero beyond the last knot).
    double slack_at(double t) const;

    /// Exact state at absolute time t: zero-order-hold within a knot
    /// interval, ballistic past the end, clamped to t0 before the start.
    BoidState state_at(double t) const;
};

/// Builds a trajectory by propagating x0 through the given controls; slack
/// values default to zero when omitted.
Trajectory make_trajectory(const BoidState& x0, double t0, double dt,
                           const std::vector<Vec2>& controls,
                           const std::vector<double>& slacks = {});

/// Appends zero-control knots so the plan covers [end_time, until].
/// Extension by zero (until <= end_time) returns the input unchanged.
Trajectory extend_ballistic(const Trajectory& trajectory, double until);

} // namespace flock
