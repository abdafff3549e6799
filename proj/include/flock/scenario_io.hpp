#pragma once
/**
 * @file scenario_io.hpp
 * @brief Plain-text scenario files: flat key/value pairs plus nested
 *        sections, diffable and fully deterministic (all randomness flows
 *        from the single `seed` key).
 *
 * Layout:
 *
 *     n_agents = 6
 *     ...                      # every FlockConfig key
 *     topology_mode = dynamic-knn | fixed
 *
 *     [placement]
 *     mode = uniform-disk | grid | explicit
 *     radius = 3.0             # uniform-disk
 *     spacing = 1.0            # grid
 *     columns = 3              # grid, optional
 *     speed_max = 1.0
 *
 *     [initial_states]         # required iff mode = explicit
 *     # id px py vx vy
 *     0 0.0 0.0 0.1 0.0
 *
 *     [overrides]              # optional per-agent parameter overrides
 *     # id key value           # key in {alpha, v_max, u_max}
 *     0 alpha 2.0
 */

#include <filesystem>
#include <string>

#include "flock/simulator.hpp"

namespace flock {

/// Parses scenario text; throws ValidationError naming the offending key or
/// line on malformed input. The returned spec has passed config validation.
ScenarioSpec parse_scenario(const std::string& text);

ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse(serialize(spec)) == spec for valid specs.
std::string serialize_scenario(const ScenarioSpec& spec);

void save_scenario(const std::filesystem::path& path, const ScenarioSpec& spec);

} // namespace flock
