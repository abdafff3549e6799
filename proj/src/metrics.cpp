#include "flock/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "flock/primitives.hpp"

namespace flock {

double velocity_disagreement(std::span<const BoidState> states) {
    if (states.size() < 2) {
        throw std::logic_error("velocity_disagreement: need at least 2 agents");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            worst = std::max(worst, (states[i].velocity - states[j].velocity).norm());
        }
    }
    return worst;
}

double total_energy(const SimulationLog& log, AgentId agent) {
    double acc = 0.0;
    for (const auto& row : log.applied_controls) {
        acc += row.at(agent).norm_sq() * log.config.sim_dt;
    }
    return acc;
}

double flock_diameter(std::span<const BoidState> states) {
    if (states.size() < 2) throw std::logic_error("flock_diameter: need at least 2 agents");
    double worst = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            worst = std::max(worst, (states[i].position - states[j].position).norm());
        }
    }
    return worst;
}

std::vector<ConsensusDiagnosticsRow> consensus_diagnostics(const SimulationLog& log) {
    std::vector<ConsensusDiagnosticsRow> rows;
    rows.reserve(log.times.size());
    const int n = log.n_agents();
    for (int ti = 0; ti < log.n_times(); ++ti) {
        const auto& states = log.states[ti];
        ConsensusDiagnosticsRow row;
        row.time = log.times[ti];
        row.speed_gap.resize(n);
        double min_speed = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const auto& members = log.memberships[ti][i];
            auto [c_pos, c_vel] = center(states, members);
            (void)c_pos;
            row.speed_gap[i] = states[i].velocity.norm() - c_vel.norm();
            if (row.speed_gap[i] > 0.0) ++row.fast_set_size;
            if (states[i].velocity.norm() < min_speed) {
                min_speed = states[i].velocity.norm();
                row.min_speed_agent = static_cast<AgentId>(i);
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RunReport make_report(const SimulationLog& log, double consensus_tol) {
    const int n = log.n_agents();
    RunReport report;
    report.diameter_bound = n * log.config.flock_radius;
    report.safety_failures = log.safety_failures.size();

    report.total_energy.resize(n);
    report.integrated_slack.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        report.total_energy[i] = total_energy(log, static_cast<AgentId>(i));
    }
    for (const auto& row : log.slack_values) {
        for (int i = 0; i < n; ++i) report.integrated_slack[i] += row[i] * log.config.sim_dt;
    }

    report.min_safety_margin = std::numeric_limits<double>::infinity();
    report.max_task_residual = -std::numeric_limits<double>::infinity();
    for (const auto& summary : log.constraint_history) {
        report.min_safety_margin = std::min(report.min_safety_margin,
                                            summary.min_safety_margin);
        report.max_task_residual = std::max(report.max_task_residual,
                                            summary.max_task_residual);
    }

    report.final_velocity_disagreement = velocity_disagreement(log.states.back());
    report.flock_diameter_final = flock_diameter(log.states.back());

    // Earliest time from which consensus persists to the end of the run.
    int first_bad = -1;
    for (int ti = log.n_times() - 1; ti >= 0; --ti) {
        if (!detect_consensus(log.states[ti], consensus_tol)) {
            first_bad = ti;
            break;
        }
    }
    if (first_bad + 1 < log.n_times()) {
        report.consensus_time = log.times[first_bad + 1];
    }

    // The synthetic zero control on the final row is not part of the applied
    // sequence; the continuity check covers the realized controls only.
    const double lipschitz = 4.0 * log.config.u_max / log.config.horizon;
    report.control_continuity_ok = true;
    if (log.n_times() >= 3) {
        for (int i = 0; i < n && report.control_continuity_ok; ++i) {
            std::vector<Vec2> controls;
            controls.reserve(log.n_times() - 1);
            for (int ti = 0; ti + 1 < log.n_times(); ++ti) {
                controls.push_back(log.applied_controls[ti][i]);
            }
            report.control_continuity_ok =
                check_control_continuity(controls, log.config.sim_dt, lipschitz).ok;
        }
    }
    return report;
}

} // namespace flock
