#pragma once
/**
 * @file primitives.hpp
 * @brief Closed-form optimal motion primitives for the fixed-topology
 *        analysis, and the discrete control-continuity check.
 *
 * Four primitives cover the arcs an optimal trajectory can follow: zero
 * control, an interior point-to-point arc with control linear in time, a
 * mirror of a safety partner's control, and the neighborhood-center
 * acceleration on a task-constrained arc. The interior arc doubles as the
 * analytic oracle the numerical planner is validated against.
 */

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "flock/core.hpp"
#include "flock/trajectory.hpp"

namespace flock {

/// Control linear in time: u(t) = a*(t - t_start) + b on [t_start, t_end].
struct UnconstrainedArc {
    Vec2 a;
    Vec2 b;
    double t_start = 0.0;
    double t_end = 0.0;

    Vec2 control_at(double t) const { return a * (t - t_start) + b; }

    /// Exact state reached from x0 at time t (t in [t_start, t_end]).
    BoidState state_at(const BoidState& x0, double t) const {
        const double tau = t - t_start;
        BoidState out;
        out.velocity = x0.velocity + b * tau + a * (0.5 * tau * tau);
        out.position = x0.position + x0.velocity * tau + b * (0.5 * tau * tau) +
                       a * (tau * tau * tau / 6.0);
        return out;
    }

    /// Energy cost 1/2 * integral of ||u||^2 over the arc.
    double cost() const {
        const double T = t_end - t_start;
        return 0.5 * (a.norm_sq() * T * T * T / 3.0 + a.dot(b) * T * T + b.norm_sq() * T);
    }
};

/// The four optimal arc families.
struct ArcKind {
    enum class Tag { ZeroControl, InteriorBVP, SafetyRiding, TaskRiding };
    Tag tag = Tag::ZeroControl;
    AgentId partner = 0; ///< meaningful for SafetyRiding only

    static ArcKind zero_control() { return {Tag::ZeroControl, 0}; }
    static ArcKind interior_bvp() { return {Tag::InteriorBVP, 0}; }
    static ArcKind safety_riding(AgentId partner) { return {Tag::SafetyRiding, partner}; }
    static ArcKind task_riding() { return {Tag::TaskRiding, 0}; }
};

/// Signals an arc may reference: the partner's control for SafetyRiding,
/// the neighborhood-center acceleration for TaskRiding, the coefficient arc
/// for InteriorBVP.
struct ArcContext {
    std::optional<Vec2> partner_control;
    std::optional<Vec2> center_accel;
    const UnconstrainedArc* arc = nullptr;
};

/**
 * @brief Minimum-energy two-point boundary arc.
 *
 * Returns the unique linear-in-time control taking x0 at t0 to xf at tf.
 * Correctness is defined by the postcondition: forward-integrating the
 * returned arc reproduces xf (property-tested, not formula-trusted).
 * Throws std::domain_error when tf <= t0.
 */
UnconstrainedArc solve_bvp(const BoidState& x0, const BoidState& xf, double t0, double tf);

/// Control of the given primitive at time t. Throws std::logic_error when
/// the context lacks the signal the primitive references.
Vec2 arc_control(const ArcKind& kind, double t, const ArcContext& context);

/// Result of the discrete Lipschitz surrogate for control continuity.
struct ContinuityCheck {
    bool ok = true;
    std::size_t first_violation = 0; ///< index of the first offending pair
    double worst_rate = 0.0;         ///< max ||du||/dt observed
};

/**
 * @brief Checks ||u[k+1] - u[k]|| <= L*dt for every consecutive pair.
 *
 * True continuity is not observable from samples; this asserts the absence
 * of O(1) jumps at constraint junctions.
 */
ContinuityCheck check_control_continuity(std::span<const Vec2> controls, double dt,
                                         double lipschitz);

} // namespace flock
