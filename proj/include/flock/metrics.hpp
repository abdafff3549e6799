#pragma once
/**
 * @file metrics.hpp
 * @brief Flock-level diagnostics computed from a finished run's log.
 */

#include <optional>
#include <span>
#include <vector>

#include "flock/simulator.hpp"

namespace flock {

/// Summary of one run: consensus, energy, constraint extremes, cohesion.
struct RunReport {
    std::optional<double> consensus_time; ///< first time consensus holds through the end
    double final_velocity_disagreement = 0.0;
    std::vector<double> total_energy;    ///< per agent, integral of ||u||^2
    double min_safety_margin = 0.0;
    double max_task_residual = 0.0;
    std::vector<double> integrated_slack; ///< per agent
    double flock_diameter_final = 0.0;
    double diameter_bound = 0.0;          ///< N * D
    bool control_continuity_ok = true;    ///< discrete Lipschitz check, fixed-topology claim
    std::size_t safety_failures = 0;
};

/// Max pairwise velocity difference.
double velocity_disagreement(std::span<const BoidState> states);

/// Left-Riemann integral of the agent's squared control norm.
double total_energy(const SimulationLog& log, AgentId agent);

/// Max pairwise distance.
double flock_diameter(std::span<const BoidState> states);

/// Per-step bookkeeping mirroring the consensus proof's working sets: the
/// agents moving faster than their neighborhood center and the slowest agent.
struct ConsensusDiagnosticsRow {
    double time = 0.0;
    int fast_set_size = 0;       ///< |{i : ||v_i|| > ||c_dot_i||}|
    AgentId min_speed_agent = 0; ///< argmin ||v_i||, ties toward the lower id
    std::vector<double> speed_gap; ///< per agent, ||v_i|| - ||c_dot_i||
};

/// Diagnostic time series; no control decision depends on it.
std::vector<ConsensusDiagnosticsRow> consensus_diagnostics(const SimulationLog& log);

/// Builds the run summary. Consensus is declared at the earliest time from
/// which detect_consensus(consensus_tol) holds at every later logged step.
RunReport make_report(const SimulationLog& log, double consensus_tol = 1e-2);

} // namespace flock
