#include "flock/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flock {

namespace {

// Knot interval containing t, clamped to [0, steps-1]; -1 when t is past the end.
int interval_index(const Trajectory& traj, double t) {
    if (traj.steps() == 0) return -1;
    const double offset = t - traj.t0;
    if (offset >= traj.dt * traj.steps()) return -1;
    const int idx = static_cast<int>(std::floor(offset / traj.dt));
    return std::clamp(idx, 0, traj.steps() - 1);
}

} // namespace

Vec2 Trajectory::control_at(double t) const {
    const int idx = interval_index(*this, t);
    return idx < 0 ? Vec2{} : controls[idx];
}

double Trajectory::slack_at(double t) const {
    const int idx = interval_index(*this, t);
    return idx < 0 ? 0.0 : slacks[idx];
}

BoidState Trajectory::state_at(double t) const {
    if (states.empty()) throw std::logic_error("Trajectory::state_at: empty trajectory");
    if (t <= t0) return states.front();
    const double offset = t - t0;
    const int whole = steps() == 0 ? 0 : static_cast<int>(std::floor(offset / dt));
    if (whole >= steps()) {
        // Ballistic past the last knot.
        const BoidState& last = states.back();
        const double tail = t - end_time();
        if (tail <= 0.0) return last;
        return integrate_step(last, Vec2{}, tail);
    }
    const double frac = offset - whole * dt;
    if (frac <= 0.0) return states[whole];
    return integrate_step(states[whole], controls[whole], frac);
}

Trajectory make_trajectory(const BoidState& x0, double t0, double dt,
                           const std::vector<Vec2>& controls,
                           const std::vector<double>& slacks) {
    if (dt <= 0.0) throw std::invalid_argument("make_trajectory: dt must be positive");
    if (!slacks.empty() && slacks.size() != controls.size()) {
        throw std::invalid_argument("make_trajectory: slack/control size mismatch");
    }
    Trajectory traj;
    traj.t0 = t0;
    traj.dt = dt;
    traj.controls = controls;
    traj.slacks = slacks.empty() ? std::vector<double>(controls.size(), 0.0) : slacks;
    traj.states.reserve(controls.size() + 1);
    traj.states.push_back(x0);
    for (const Vec2& u : controls) {
        traj.states.push_back(integrate_step(traj.states.back(), u, dt));
    }
    return traj;
}

Trajectory extend_ballistic(const Trajectory& trajectory, double until) {
    if (trajectory.states.empty()) {
        throw std::logic_error("extend_ballistic: empty trajectory");
    }
    if (trajectory.dt <= 0.0) {
        throw std::logic_error("extend_ballistic: trajectory has no knot spacing");
    }
    Trajectory out = trajectory;
    // Half-step tolerance so an exact-cover request appends nothing.
    while (out.end_time() + 0.5 * out.dt < until) {
        out.controls.push_back(Vec2{});
        out.slacks.push_back(0.0);
        out.states.push_back(integrate_step(out.states.back(), Vec2{}, out.dt));
    }
    return out;
}

} // namespace flock
