#include "doctest.h"

#include <filesystem>

#include "gridrl/oracles.hpp"
#include "gridrl/policy_graph.hpp"
#include "gridrl/verify.hpp"

using namespace gridrl;

namespace {

// Network whose value equals the state's x coordinate, so greedy moves
// always head right.
NetParams prefer_right_net() {
    NetParams p = NetParams::zeros();
    p.w1[0] = 1.0;               // unit 0 reads s_x
    p.w2[0 * kHiddenDim + 0] = 1.0;
    p.w3[0] = 1.0;
    return p;
}

}  // namespace

TEST_CASE("greedy successor honors the absorbing convention") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const NetParams zero = NetParams::zeros();
    CHECK(greedy_successor(zero, grid, {3, 3}, {3, 3}) == State{3, 3});
}

TEST_CASE("all-tie values fall back to the canonical first action") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const NetParams zero = NetParams::zeros();
    // Up decreases y; at the top row it clamps.
    CHECK(greedy_successor(zero, grid, {3, 3}, {0, 0}) == State{3, 2});
    CHECK(greedy_successor(zero, grid, {3, 0}, {0, 0}) == State{3, 0});
    CHECK(greedy_action(zero, grid, {3, 0}, {0, 0}) == Action::Up);
}

TEST_CASE("crafted values pick the intended neighbor") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const NetParams p = prefer_right_net();
    CHECK(greedy_successor(p, grid, {3, 3}, {6, 3}) == State{4, 3});
    // Values match the probe on every candidate successor.
    CHECK(oracles::forward_reference(p, {4, 3}, {6, 3}) == 4.0);
}

TEST_CASE("successor maps are total, local, and deterministic") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const StateIndex index(grid);
    const NetParams p = init_params(2).params;
    const SuccessorMap a = build_successor_map(p, grid, index, {5, 2});
    const SuccessorMap b = build_successor_map(p, grid, index, {5, 2});
    REQUIRE(a.next.size() == 64);
    CHECK(a.next == b.next);
    CHECK(a.next[a.goal_index] == a.goal_index);
    for (int i = 0; i < index.size(); ++i) {
        CHECK(a.next[i] >= 0);
        CHECK(manhattan(index.state(i), index.state(a.next[i])) <= 1);
    }
}

TEST_CASE("converging fixture decomposes into a single goal attractor") {
    const SuccessorMap m = verify::converging_3x3();
    const GraphDecomposition d = decompose(m);
    REQUIRE(d.attractors.size() == 1);
    CHECK(d.attractors[0].kind == AttractorKind::Goal);
    CHECK(d.attractors[0].states == std::vector<std::int32_t>{m.goal_index});
    int max_transient = 0;
    for (std::int32_t t : d.transient) {
        max_transient = std::max(max_transient, t);
    }
    CHECK(max_transient == 2);
    CHECK(d.basin_size(0) == 9);
}

TEST_CASE("two-basin fixture splits 6/3 with a 2-cycle") {
    const SuccessorMap m = verify::two_basin_3x3();
    const GraphDecomposition d = decompose(m);
    REQUIRE(d.attractors.size() == 2);
    int goal_idx = d.attractors[0].kind == AttractorKind::Goal ? 0 : 1;
    CHECK(d.attractors[goal_idx].kind == AttractorKind::Goal);
    CHECK(d.attractors[1 - goal_idx].kind == AttractorKind::Cycle);
    CHECK(d.attractors[1 - goal_idx].states.size() == 2);
    CHECK(d.basin_size(goal_idx) == 6);
    CHECK(d.basin_size(1 - goal_idx) == 3);
}

TEST_CASE("identity map is all singleton attractors") {
    const SuccessorMap m = verify::identity_map(GridSpec::open(4, 5, 8));
    const GraphDecomposition d = decompose(m);
    CHECK(d.attractors.size() == 20);
    for (std::size_t i = 0; i < d.attractors.size(); ++i) {
        CHECK(d.attractors[i].states.size() == 1);
        CHECK(d.basin_size(static_cast<int>(i)) == 1);
    }
    for (std::int32_t t : d.transient) {
        CHECK(t == 0);
    }
}

TEST_CASE("decompose matches the quadratic reference on random maps") {
    Rng rng(31);
    for (int k = 0; k < 200; ++k) {
        const int n = 1 + rng.uniform_index(64);
        const auto next = oracles::random_functional_map(n, rng);
        CHECK(decompose(next, -1) == oracles::decompose_reference(next, -1));
    }
}

TEST_CASE("cycles are stored from their smallest state in orbit order") {
    Rng rng(77);
    for (int k = 0; k < 50; ++k) {
        const int n = 2 + rng.uniform_index(50);
        const auto next = oracles::random_functional_map(n, rng);
        const GraphDecomposition d = decompose(next, -1);
        for (const Attractor& a : d.attractors) {
            for (std::int32_t s : a.states) {
                CHECK(a.states[0] <= s);
            }
            for (std::size_t i = 0; i < a.states.size(); ++i) {
                CHECK(next[a.states[i]] ==
                      a.states[(i + 1) % a.states.size()]);
            }
        }
    }
}

TEST_CASE("horizon success sets match rollouts and grow with horizon") {
    const SuccessorMap m = verify::two_basin_3x3();
    // H=1: exactly the neighbors mapping straight into the goal.
    const auto h1 = horizon_success_set(m, 1);
    CHECK(h1 == std::vector<std::int32_t>{1, 5, 7});
    const auto h2 = horizon_success_set(m, 2);
    CHECK(h2.size() == 5);
    CHECK(horizon_success_set(m, 8) == h2);
    CHECK(horizon_success_set_forward(m, 1) == h1);
    CHECK(horizon_success_set_forward(m, 2) == h2);
}

TEST_CASE("zero-support maps have empty success sets at any horizon") {
    const SuccessorMap m = verify::identity_map(GridSpec::open(3, 3, 8));
    for (int h : {1, 2, 10, 100}) {
        CHECK(horizon_success_set(m, h).empty());
    }
}

TEST_CASE("both success routes agree on random grid maps") {
    Rng rng(13);
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const StateIndex index(grid);
    for (int k = 0; k < 40; ++k) {
        const State goal = index.state(rng.uniform_index(index.size()));
        const SuccessorMap m =
            oracles::random_grid_map(grid, index, goal, rng);
        for (int h : {1, 5, 16, 64}) {
            CHECK(horizon_success_set(m, h) ==
                  horizon_success_set_forward(m, h));
        }
    }
}

TEST_CASE("successor map CSV round-trips") {
    const GridSpec grid = GridSpec::open(3, 3, 8);
    const StateIndex index(grid);
    const SuccessorMap m = verify::two_basin_3x3();
    const std::string path =
        (std::filesystem::temp_directory_path() / "gridrl_map_test.csv")
            .string();
    save_successor_map_csv(m, index, path);
    const SuccessorMap restored =
        load_successor_map_csv(grid, index, m.goal, path);
    CHECK(restored.next == m.next);
    CHECK(restored.goal_index == m.goal_index);
    std::filesystem::remove(path);
}
