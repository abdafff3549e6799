#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "flock/neighborhood.hpp"

using namespace flock;

namespace {

// Independent brute-force k-nearest oracle: full sort over (distance, id).
std::vector<AgentId> knn_oracle(const std::vector<Vec2>& positions, AgentId i, int k) {
    std::vector<std::pair<double, AgentId>> all;
    for (AgentId j = 0; j < positions.size(); ++j) {
        if (j == i) continue;
        all.emplace_back((positions[j] - positions[i]).norm_sq(), j);
    }
    std::sort(all.begin(), all.end());
    std::vector<AgentId> ids;
    for (int m = 0; m < k; ++m) ids.push_back(all[m].second);
    std::sort(ids.begin(), ids.end());
    return ids;
}

} // namespace

TEST_CASE("knn picks the nearest ids") {
    std::vector<Vec2> pos{{0, 0}, {1, 0}, {3, 0}, {10, 0}};
    CHECK(knn(pos, 0, 2) == std::vector<AgentId>{1, 2});
    CHECK(knn(pos, 2, 2) == knn_oracle(pos, 2, 2));
    CHECK(knn(pos, 2, 2) == std::vector<AgentId>{0, 1});
}

TEST_CASE("knn breaks distance ties toward the lower id") {
    std::vector<Vec2> pos{{0, 0}, {1, 0}, {-1, 0}};
    CHECK(knn(pos, 0, 1) == std::vector<AgentId>{1});
}

TEST_CASE("knn rejects k >= N") {
    std::vector<Vec2> pos{{0, 0}, {1, 0}};
    CHECK_THROWS_AS(knn(pos, 0, 2), ValidationError);
}

TEST_CASE("knn matches the brute-force oracle on random inputs") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::uniform_int_distribution<int> n_dist(3, 9);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = n_dist(rng);
        std::vector<Vec2> pos(n);
        for (auto& p : pos) p = {dist(rng), dist(rng)};
        std::uniform_int_distribution<int> k_dist(1, n - 1);
        std::uniform_int_distribution<int> i_dist(0, n - 1);
        const int k = k_dist(rng);
        const AgentId i = static_cast<AgentId>(i_dist(rng));
        CHECK(knn(pos, i, k) == knn_oracle(pos, i, k));
    }
}

TEST_CASE("knn is deterministic") {
    std::vector<Vec2> pos{{0.5, 0.5}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    auto first = knn(pos, 0, 3);
    for (int repeat = 0; repeat < 5; ++repeat) CHECK(knn(pos, 0, 3) == first);
}

TEST_CASE("center is the member mean") {
    std::vector<BoidState> states{
        {{0, 0}, {1, 1}}, {{2, 2}, {0, 0}}, {{1, 0}, {1, 1}}, {{2, 3}, {1, 1}}};
    std::vector<AgentId> two{0, 1};
    auto [c1, cd1] = center(states, two);
    CHECK(c1.x == doctest::Approx(1.0));
    CHECK(c1.y == doctest::Approx(1.0));

    std::vector<AgentId> one{2};
    auto [c2, cd2] = center(states, one);
    CHECK(c2 == states[2].position);
    CHECK(cd2 == states[2].velocity);

    std::vector<AgentId> three{0, 2, 3};
    auto [c3, cd3] = center(states, three);
    CHECK(c3.x == doctest::Approx(1.0));
    CHECK(c3.y == doctest::Approx(1.0));
    CHECK(cd3.x == doctest::Approx(1.0));
    CHECK(cd3.y == doctest::Approx(1.0));

    std::vector<AgentId> none;
    CHECK_THROWS_AS(center(states, none), std::logic_error);
}

TEST_CASE("detect_switch reports removed and added sets") {
    NeighborhoodSnapshot prev, next;
    prev.owner = next.owner = 0;

    prev.members = {1, 2};
    next.members = {1, 2};
    CHECK_FALSE(detect_switch(prev, next, 1.0).has_value());

    next.members = {1, 3};
    auto ev = detect_switch(prev, next, 1.0);
    REQUIRE(ev.has_value());
    CHECK(ev->removed == std::vector<AgentId>{2});
    CHECK(ev->added == std::vector<AgentId>{3});
    CHECK(ev->time == 1.0);

    next.members = {3, 4};
    ev = detect_switch(prev, next, 2.0);
    REQUIRE(ev.has_value());
    CHECK(ev->removed == std::vector<AgentId>{1, 2});
    CHECK(ev->added == std::vector<AgentId>{3, 4});

    next.owner = 1;
    CHECK_THROWS_AS(detect_switch(prev, next, 0.0), std::logic_error);
}

TEST_CASE("symmetric switch classification") {
    // ids: 0 owner, 1..4 the swap participants.
    std::vector<BoidState> states(5);

    SwitchEvent ev;
    ev.agent = 0;

    SUBCASE("identical aggregates") {
        states[1] = {{1, 0}, {1, 0}};
        states[2] = {{1, 0}, {1, 0}};
        ev.removed = {1};
        ev.added = {2};
        CHECK(is_symmetric_switch(ev, states, 1e-9));
    }

    SUBCASE("mismatched positions") {
        states[1] = {{1, 0}, {0, 0}};
        states[2] = {{2, 0}, {0, 0}};
        ev.removed = {1};
        ev.added = {2};
        CHECK_FALSE(is_symmetric_switch(ev, states, 1e-9));
    }

    SUBCASE("aggregate-equal two-for-two swap") {
        states[1] = {{0, 1}, {0.5, -0.25}};
        states[2] = {{2, -1}, {-0.5, 0.25}};
        states[3] = {{1, 0}, {0.125, 0.5}};
        states[4] = {{1, 0}, {-0.125, -0.5}};
        // verify the aggregates actually match before asserting the classifier
        Vec2 sum_removed_p = states[1].position + states[2].position;
        Vec2 sum_added_p = states[3].position + states[4].position;
        Vec2 sum_removed_v = states[1].velocity + states[2].velocity;
        Vec2 sum_added_v = states[3].velocity + states[4].velocity;
        REQUIRE((sum_removed_p - sum_added_p).norm() == 0.0);
        REQUIRE((sum_removed_v - sum_added_v).norm() == 0.0);
        ev.removed = {1, 2};
        ev.added = {3, 4};
        CHECK(is_symmetric_switch(ev, states, 1e-9));
    }
}

TEST_CASE("make_snapshot aggregates member state and last controls") {
    std::vector<BoidState> states{
        {{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}, {{5, 5}, {2, 2}}};
    std::vector<Vec2> controls{{0, 0}, {0.5, 0}, {0, 0.5}, {9, 9}};
    NeighborhoodSnapshot snap = make_snapshot(states, controls, 0, 2);
    CHECK(snap.members == std::vector<AgentId>{1, 2});
    CHECK(snap.center_pos.x == doctest::Approx(0.5));
    CHECK(snap.center_pos.y == doctest::Approx(0.5));
    CHECK(snap.center_vel.x == doctest::Approx(0.5));
    CHECK(snap.center_vel.y == doctest::Approx(0.5));
    CHECK(snap.center_acc.x == doctest::Approx(0.25));
    CHECK(snap.center_acc.y == doctest::Approx(0.25));
}

TEST_CASE("sampled center moves within the speed bound between switches") {
    // Ballistic agents, no membership change: ||c(t+dt) - c(t)|| <= v_max dt.
    const double v_max = 1.0;
    const double dt = 0.01;
    std::vector<BoidState> states{
        {{0, 0}, {0.3, 0.1}}, {{1, 0}, {-0.5, 0.2}}, {{0, 1}, {0.2, -0.9}}};
    std::vector<AgentId> members{1, 2};
    auto [c_prev, cd_prev] = center(states, members);
    for (int step = 0; step < 100; ++step) {
        for (auto& s : states) s = integrate_step(s, {0, 0}, dt);
        auto [c, cd] = center(states, members);
        CHECK((c - c_prev).norm() <= (v_max + 1e-9) * dt);
        c_prev = c;
    }
}
