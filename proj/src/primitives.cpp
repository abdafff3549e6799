#include "flock/primitives.hpp"

#include <stdexcept>

namespace flock {

UnconstrainedArc solve_bvp(const BoidState& x0, const BoidState& xf, double t0,
                           double tf) {
    if (tf <= t0) throw std::domain_error("solve_bvp: tf must exceed t0");
    if (!x0.is_finite() || !xf.is_finite()) {
        throw std::invalid_argument("solve_bvp: non-finite input");
    }
    const double T = tf - t0;
    // Moment equations for u(tau) = a*tau + b over [0, T]:
    //   dv      = b*T   + a*T^2/2
    //   dp_free = b*T^2/2 + a*T^3/6   (position change beyond ballistic drift)
    const Vec2 dv = xf.velocity - x0.velocity;
    const Vec2 dp_free = xf.position - x0.position - x0.velocity * T;

    UnconstrainedArc arc;
    arc.t_start = t0;
    arc.t_end = tf;
    arc.a = dv * (6.0 / (T * T)) - dp_free * (12.0 / (T * T * T));
    arc.b = dp_free * (6.0 / (T * T)) - dv * (2.0 / T);
    return arc;
}

Vec2 arc_control(const ArcKind& kind, double t, const ArcContext& context) {
    switch (kind.tag) {
    case ArcKind::Tag::ZeroControl:
        return {};
    case ArcKind::Tag::InteriorBVP:
        if (context.arc == nullptr) {
            throw std::logic_error("arc_control: InteriorBVP requires an arc");
        }
        return context.arc->control_at(t);
    case ArcKind::Tag::SafetyRiding:
        if (!context.partner_control) {
            throw std::logic_error("arc_control: SafetyRiding requires the partner control");
        }
        return *context.partner_control;
    case ArcKind::Tag::TaskRiding:
        if (!context.center_accel) {
            throw std::logic_error("arc_control: TaskRiding requires the center acceleration");
        }
        return *context.center_accel;
    }
    throw std::logic_error("arc_control: unknown arc tag");
}

ContinuityCheck check_control_continuity(std::span<const Vec2> controls, double dt,
                                         double lipschitz) {
    if (controls.size() < 2) {
        throw std::invalid_argument("check_control_continuity: need at least two samples");
    }
    ContinuityCheck result;
    const double bound = lipschitz * dt;
    for (std::size_t k = 0; k + 1 < controls.size(); ++k) {
        const double jump = (controls[k + 1] - controls[k]).norm();
        result.worst_rate = std::max(result.worst_rate, jump / dt);
        if (result.ok && jump > bound) {
            result.ok = false;
            result.first_violation = k;
        }
    }
    return result;
}

} // namespace flock
