#pragma once
/**
 * @file acceptance.hpp
 * @brief End-to-end verification batteries: the analytic-oracle comparison,
 *        the consensus/continuity/safety/diameter experiments, constructed
 *        switch scenarios and the determinism check.
 *
 * Shared between the `flocksim verify`/`flocksim oracle` commands and the
 * acceptance test binary so both report identical results.
 */

#include <string>
#include <vector>

#include "flock/simulator.hpp"

namespace flock {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Fixed-topology consensus experiment (complete graph, N=5).
ScenarioSpec consensus_scenario(long long seed);

/// Four agents already at velocity consensus with every constraint slack.
ScenarioSpec consensus_hold_scenario();

/// Dynamic-topology scenario whose neighborhood switches force slack.
ScenarioSpec slack_tradeoff_scenario(double alpha);

/// Planner-vs-analytic-arc battery: random pinned-endpoint instances plus
/// the rest-to-rest and ballistic reference cases.
std::vector<CheckResult> oracle_battery();

/// Runs the full acceptance criteria list in order, one result each.
std::vector<CheckResult> acceptance_criteria();

/// Named property suite for the CLI: continuity, switch, consensus, safety,
/// diameter or all. Throws ValidationError on an unknown name.
std::vector<CheckResult> verify_suite(const std::string& suite);

} // namespace flock
