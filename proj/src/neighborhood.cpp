#include "flock/neighborhood.hpp"

#include <algorithm>
#include <stdexcept>

namespace flock {

std::vector<AgentId> knn(std::span<const Vec2> positions, AgentId i, int k) {
    const int n = static_cast<int>(positions.size());
    if (k < 1) throw ValidationError("k", "must be at least 1");
    if (k >= n) throw ValidationError("k", "must be less than the number of agents");
    if (i >= positions.size()) throw std::logic_error("knn: owner id out of range");

    // (squared distance, id) pairs; the id component makes the order total.
    std::vector<std::pair<double, AgentId>> by_distance;
    by_distance.reserve(n - 1);
    for (AgentId j = 0; j < positions.size(); ++j) {
        if (j == i) continue;
        if (!positions[j].is_finite()) {
            throw std::invalid_argument("knn: non-finite position");
        }
        by_distance.emplace_back(distance_sq(positions[i], positions[j]), j);
    }
    std::partial_sort(by_distance.begin(), by_distance.begin() + k, by_distance.end());

    std::vector<AgentId> members;
    members.reserve(k);
    for (int m = 0; m < k; ++m) members.push_back(by_distance[m].second);
    std::sort(members.begin(), members.end());
    return members;
}

std::pair<Vec2, Vec2> center(std::span<const BoidState> states,
                             std::span<const AgentId> members) {
    if (members.empty()) throw std::logic_error("center: empty member set");
    Vec2 pos_sum, vel_sum;
    for (AgentId j : members) {
        if (j >= states.size()) throw std::logic_error("center: member id out of range");
        pos_sum += states[j].position;
        vel_sum += states[j].velocity;
    }
    const double inv_k = 1.0 / static_cast<double>(members.size());
    return {pos_sum * inv_k, vel_sum * inv_k};
}

std::optional<SwitchEvent> detect_switch(const NeighborhoodSnapshot& prev,
                                         const NeighborhoodSnapshot& next, double time) {
    if (prev.owner != next.owner) throw std::logic_error("detect_switch: owner mismatch");

    SwitchEvent event;
    event.agent = prev.owner;
    event.time = time;
    std::set_difference(prev.members.begin(), prev.members.end(), next.members.begin(),
                        next.members.end(), std::back_inserter(event.removed));
    std::set_difference(next.members.begin(), next.members.end(), prev.members.begin(),
                        prev.members.end(), std::back_inserter(event.added));
    if (event.removed.empty() && event.added.empty()) return std::nullopt;
    return event;
}

bool is_symmetric_switch(const SwitchEvent& event, std::span<const BoidState> states,
                         double tol) {
    Vec2 dp, dv;
    for (AgentId j : event.removed) {
        dp += states[j].position;
        dv += states[j].velocity;
    }
    for (AgentId j : event.added) {
        dp -= states[j].position;
        dv -= states[j].velocity;
    }
    return dp.norm() <= tol && dv.norm() <= tol;
}

NeighborhoodSnapshot make_snapshot(std::span<const BoidState> states,
                                   std::span<const Vec2> last_controls, AgentId owner,
                                   int k) {
    std::vector<Vec2> positions;
    positions.reserve(states.size());
    for (const auto& s : states) positions.push_back(s.position);

    NeighborhoodSnapshot snap;
    snap.owner = owner;
    snap.members = knn(positions, owner, k);
    std::tie(snap.center_pos, snap.center_vel) = center(states, snap.members);

    Vec2 acc_sum;
    for (AgentId j : snap.members) {
        if (j < last_controls.size()) acc_sum += last_controls[j];
    }
    snap.center_acc = acc_sum / static_cast<double>(snap.members.size());
    return snap;
}

} // namespace flock
