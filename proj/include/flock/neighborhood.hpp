#pragma once
/**
 * @file neighborhood.hpp
 * @brief k-nearest-neighbor sets, neighborhood centers and switch events.
 *
 * Neighborhoods are directed: j in N_i does not imply i in N_j. Member
 * lists are kept sorted by id so identical inputs always produce identical
 * sets (ties in distance break toward the lower id).
 */

#include <optional>
#include <span>
#include <vector>

#include "flock/core.hpp"

namespace flock {

/// An agent's neighbor set plus the center state of that set.
struct NeighborhoodSnapshot {
    AgentId owner = 0;
    std::vector<AgentId> members; ///< sorted by id, size k, owner excluded
    Vec2 center_pos;              ///< c_i: mean member position
    Vec2 center_vel;              ///< c_i_dot: mean member velocity
    Vec2 center_acc;              ///< c_i_ddot: mean of members' last applied controls
};

/// A change of neighborhood membership at one instant.
struct SwitchEvent {
    AgentId agent = 0;
    double time = 0.0;
    std::vector<AgentId> removed; ///< O: left the set, sorted by id
    std::vector<AgentId> added;   ///< P: entered the set, sorted by id
    bool symmetric = false;
};

/**
 * @brief Ids of the k agents nearest to agent i, sorted by id.
 *
 * Distance ties break toward the lower id. Throws ValidationError when
 * k >= positions.size().
 */
std::vector<AgentId> knn(std::span<const Vec2> positions, AgentId i, int k);

/// Mean position and mean velocity of the given members.
/// Throws std::logic_error on an empty member set.
std::pair<Vec2, Vec2> center(std::span<const BoidState> states,
                             std::span<const AgentId> members);

/**
 * @brief Compares two snapshots of the same owner and reports the membership
 *        change, or nothing when the sets are equal.
 *
 * The returned event is not yet classified; callers that care about
 * symmetry run is_symmetric_switch on it.
 */
std::optional<SwitchEvent> detect_switch(const NeighborhoodSnapshot& prev,
                                         const NeighborhoodSnapshot& next,
                                         double time);

/// True iff the removed and added sets have equal position and velocity sums
/// within tol. Exact symmetry is measure-zero in practice; this classifier
/// exists chiefly for constructed scenarios.
bool is_symmetric_switch(const SwitchEvent& event, std::span<const BoidState> states,
                         double tol = 1e-9);

/// Builds a full snapshot: knn members, their center position/velocity, and
/// center acceleration from the members' last applied controls.
NeighborhoodSnapshot make_snapshot(std::span<const BoidState> states,
                                   std::span<const Vec2> last_controls, AgentId owner,
                                   int k);

} // namespace flock
