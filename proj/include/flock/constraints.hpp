#pragma once
/**
 * @file constraints.hpp
 * @brief Safety and task constraint residuals plus the tangency pair used
 *        by junction checks.
 *
 * Conventions: a nonnegative safety margin means the pair is safe; a
 * nonpositive task residual means the aggregation constraint holds. Both
 * use the squared form so derivatives stay smooth on the boundary.
 */

#include <limits>
#include <map>
#include <span>
#include <utility>

#include "flock/core.hpp"

namespace flock {

/// Pairwise safety margin ||s_ij||^2 - 4R^2. Nonnegative means safe.
constexpr double safety_margin(const Vec2& s_ij, double body_radius) {
    return s_ij.norm_sq() - 4.0 * body_radius * body_radius;
}

/// Task (aggregation) residual ||p_i - c_i||^2 - D^2. Nonpositive means the
/// agent is within the flocking radius of its neighborhood center.
constexpr double task_residual(const Vec2& p_i, const Vec2& c_i, double flock_radius) {
    return (p_i - c_i).norm_sq() - flock_radius * flock_radius;
}

/**
 * @brief Residual pair (g_i, s_i . s_dot_i) with s_i = p_i - c_i.
 *
 * Both components zero means the agent sits on the task boundary moving
 * tangentially, the junction condition for entering a task-constrained arc.
 */
constexpr std::pair<double, double> tangency_residuals(const Vec2& p_i, const Vec2& v_i,
                                                       const Vec2& c_i, const Vec2& c_dot_i,
                                                       double flock_radius) {
    const Vec2 s = p_i - c_i;
    const Vec2 s_dot = v_i - c_dot_i;
    return {s.norm_sq() - flock_radius * flock_radius, s.dot(s_dot)};
}

/// Default hard-safety tolerance: discretization allowance only, scaled by
/// the squared contact distance.
constexpr double hard_safety_tol(double body_radius) {
    const double d = 2.0 * body_radius;
    return 1e-6 * d * d;
}

/// Snapshot of every constraint residual at one instant.
struct ConstraintReport {
    std::map<std::pair<AgentId, AgentId>, double> safety_margins; ///< both orderings
    std::map<AgentId, double> task_residuals;
    std::map<AgentId, double> slack_values;

    double min_safety_margin() const {
        double min = std::numeric_limits<double>::infinity();
        for (const auto& [pair, margin] : safety_margins) min = std::min(min, margin);
        return min;
    }
    double max_task_residual() const {
        double max = -std::numeric_limits<double>::infinity();
        for (const auto& [id, g] : task_residuals) max = std::max(max, g);
        return max;
    }
    double max_slack() const {
        double max = 0.0;
        for (const auto& [id, s] : slack_values) max = std::max(max, s);
        return max;
    }
};

/// Evaluates every pairwise margin and per-agent residual at one instant.
/// `centers[i]` is agent i's neighborhood center, `slacks[i]` its active
/// slack value.
inline ConstraintReport make_constraint_report(std::span<const BoidState> states,
                                               std::span<const Vec2> centers,
                                               std::span<const double> slacks,
                                               double body_radius, double flock_radius) {
    ConstraintReport report;
    for (AgentId i = 0; i < states.size(); ++i) {
        for (AgentId j = i + 1; j < states.size(); ++j) {
            const double margin =
                safety_margin(displacement(states[i].position, states[j].position),
                              body_radius);
            report.safety_margins[{i, j}] = margin;
            report.safety_margins[{j, i}] = margin;
        }
        report.task_residuals[i] =
            task_residual(states[i].position, centers[i], flock_radius);
        report.slack_values[i] = slacks[i];
    }
    return report;
}

} // namespace flock
