#pragma once
/**
 * @file core.hpp
 * @brief Agent state, system parameters, exact double-integrator propagation
 *        and the quadratic energy model.
 *
 * The dynamics are linear, so a zero-order-hold step is propagated exactly
 * (closed form) rather than with a numeric integrator. That keeps
 * integration error out of every downstream consistency check.
 */

#include <cstdint>
#include <stdexcept>
#include <string>

#include "flock/vec2.hpp"

namespace flock {

using AgentId = std::uint32_t;

/// Position/velocity pair of one agent at an instant.
struct BoidState {
    Vec2 position;
    Vec2 velocity;

    bool is_finite() const { return position.is_finite() && velocity.is_finite(); }
};

/**
 * @brief All scalar system parameters shared by a run.
 *
 * Every agent shares one alpha / v_max / u_max / body_radius; scenario files
 * may override alpha, v_max and u_max per agent (see ScenarioSpec).
 */
struct FlockConfig {
    int n_agents = 0;          ///< N
    int k = 0;                 ///< neighborhood size, 1 <= k <= N-1
    double body_radius = 0.0;  ///< R; pairwise safety requires distance >= 2R
    double flock_radius = 0.0; ///< D; aggregation radius around the neighborhood center
    double alpha = 0.0;        ///< slack weight in the planning objective
    double v_max = 0.0;
    double u_max = 0.0;
    double horizon = 0.0;      ///< planning horizon length
    int plan_steps = 0;        ///< M, knots per plan
    double sim_dt = 0.0;
    double replan_interval = 0.0;
    double total_time = 0.0;
    long long seed = 0;
};

/// Thrown when a config or scenario value is out of range. The message
/// always starts with the offending key name.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(const std::string& key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Validates all FlockConfig invariants; throws ValidationError naming the
/// first offending key. Returns a warning string (empty if none) for
/// conditions that are suspicious but legal, e.g. v_max*sim_dt > body_radius.
inline std::string validate(const FlockConfig& c) {
    auto require = [](bool ok, const char* key, const char* msg) {
        if (!ok) throw ValidationError(key, msg);
    };
    require(c.n_agents >= 2, "n_agents", "must be at least 2");
    require(c.k >= 1, "k", "must be at least 1");
    require(c.k <= c.n_agents - 1, "k", "must be at most n_agents - 1");
    require(c.body_radius > 0.0, "body_radius", "must be positive");
    require(c.flock_radius > 2.0 * c.body_radius, "flock_radius",
            "must exceed twice body_radius");
    require(c.alpha >= 0.0, "alpha", "must be nonnegative");
    require(c.v_max > 0.0, "v_max", "must be positive");
    require(c.u_max > 0.0, "u_max", "must be positive");
    require(c.horizon > 0.0, "horizon", "must be positive");
    require(c.plan_steps >= 1, "plan_steps", "must be at least 1");
    require(c.sim_dt > 0.0, "sim_dt", "must be positive");
    require(c.replan_interval >= c.sim_dt, "replan_interval",
            "must be at least sim_dt");
    require(c.replan_interval <= c.horizon, "replan_interval",
            "must be at most horizon");
    require(c.total_time > 0.0, "total_time", "must be positive");
    if (c.v_max * c.sim_dt > c.body_radius) {
        return "sim_dt: v_max*sim_dt exceeds body_radius; knot-only safety "
               "checks may miss inter-step approaches";
    }
    return {};
}

/**
 * @brief Exact zero-order-hold propagation over one step.
 *
 * position' = position + velocity*dt + u*dt^2/2, velocity' = velocity + u*dt.
 * Composing two half steps with constant u equals one full step to machine
 * precision.
 */
inline BoidState integrate_step(const BoidState& state, const Vec2& u, double dt) {
    if (!state.is_finite() || !u.is_finite() || !std::isfinite(dt)) {
        throw std::invalid_argument("integrate_step: non-finite input");
    }
    if (dt <= 0.0) {
        throw std::invalid_argument("integrate_step: dt must be positive");
    }
    BoidState next;
    next.position = state.position + state.velocity * dt + u * (0.5 * dt * dt);
    next.velocity = state.velocity + u * dt;
    return next;
}

/// Rate of energy consumption: squared norm of the control input.
inline double energy_rate(const Vec2& u) {
    if (!u.is_finite()) throw std::invalid_argument("energy_rate: non-finite input");
    return u.norm_sq();
}

/// Relative displacement from agent i to agent j: p_j - p_i.
constexpr Vec2 displacement(const Vec2& p_i, const Vec2& p_j) { return p_j - p_i; }

} // namespace flock
