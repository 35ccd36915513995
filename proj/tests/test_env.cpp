#include "doctest.h"

#include <stdexcept>

#include "gridrl/env.hpp"

using namespace gridrl;

TEST_CASE("boundary moves clamp to the current cell") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    CHECK(step(grid, {0, 0}, Action::Left) == State{0, 0});
    CHECK(step(grid, {0, 0}, Action::Up) == State{0, 0});
    CHECK(step(grid, {7, 7}, Action::Right) == State{7, 7});
    CHECK(step(grid, {7, 7}, Action::Down) == State{7, 7});
}

TEST_CASE("interior moves follow the frozen axis convention") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    CHECK(step(grid, {3, 3}, Action::Up) == State{3, 2});
    CHECK(step(grid, {3, 3}, Action::Down) == State{3, 4});
    CHECK(step(grid, {3, 3}, Action::Left) == State{2, 3});
    CHECK(step(grid, {3, 3}, Action::Right) == State{4, 3});
}

TEST_CASE("wall moves clamp") {
    const GridSpec grid(8, 8, 24, std::vector<State>{{4, 2}});
    CHECK(step(grid, {3, 2}, Action::Right) == State{3, 2});
    CHECK(step(grid, {5, 2}, Action::Left) == State{5, 2});
}

TEST_CASE("reward fires exactly on goal entry") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const State goal{3, 2};
    CHECK(step(grid, {3, 3}, Action::Up, goal).reward == 1);
    CHECK(step(grid, {3, 3}, Action::Down, goal).reward == 0);
    // Clamped move onto the goal cell cannot happen; clamping stays put.
    CHECK(step(grid, {0, 0}, Action::Left, {0, 0}).reward == 1);
}

TEST_CASE("step rejects invalid source states") {
    const GridSpec grid(8, 8, 24, std::vector<State>{{4, 2}});
    CHECK_THROWS_AS(step(grid, {4, 2}, Action::Up), std::invalid_argument);
    CHECK_THROWS_AS(step(grid, {-1, 0}, Action::Up), std::invalid_argument);
}

TEST_CASE("valid state counts and ordering") {
    CHECK(valid_states(GridSpec::open(8, 8, 16)).size() == 64);
    CHECK(valid_states(GridSpec::open(12, 12, 24)).size() == 144);
    const GridSpec tiny(2, 2, 4, std::vector<State>{{1, 0}});
    const auto states = valid_states(tiny);
    REQUIRE(states.size() == 3);
    // Row-major: y outer, x inner.
    CHECK(states[0] == State{0, 0});
    CHECK(states[1] == State{0, 1});
    CHECK(states[2] == State{1, 1});
}

TEST_CASE("grid construction validates inputs") {
    CHECK_THROWS_AS(GridSpec(0, 3, 5), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(3, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(3, 3, 5, std::vector<State>{{3, 0}}),
                    std::invalid_argument);
    // All cells walled off.
    std::vector<State> all;
    for (int y = 0; y < 2; ++y) {
        for (int x = 0; x < 2; ++x) {
            all.push_back({x, y});
        }
    }
    CHECK_THROWS_AS(GridSpec(2, 2, 5, all), std::invalid_argument);
}

TEST_CASE("neighborhood sizes by position") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    CHECK(neighbors(grid, {0, 0}).size() == 2);
    CHECK(neighbors(grid, {3, 4}).size() == 4);
    CHECK(neighbors(grid, {0, 4}).size() == 3);
    for (const State& n : neighbors(grid, {3, 4})) {
        CHECK(manhattan(n, {3, 4}) == 1);
    }
}

TEST_CASE("manhattan distance") {
    CHECK(manhattan({0, 0}, {0, 0}) == 0);
    CHECK(manhattan({0, 0}, {7, 7}) == 14);
    CHECK(manhattan({3, 4}, {4, 3}) == 2);
}

TEST_CASE("step is total and local on every grid") {
    const GridSpec grids[] = {GridSpec::open(8, 8, 16),
                              GridSpec::open(12, 12, 24),
                              GridSpec::bottleneck8(24)};
    for (const GridSpec& grid : grids) {
        for (const State& s : valid_states(grid)) {
            for (Action a : all_actions()) {
                const State next = step(grid, s, a);
                CHECK(grid.is_valid(next));
                CHECK(manhattan(s, next) <= 1);
            }
        }
    }
}

TEST_CASE("bottleneck layout leaves a one-cell gap") {
    const GridSpec grid = GridSpec::bottleneck8(24);
    CHECK(grid.num_valid_states() == 57);
    CHECK(grid.is_valid({4, 4}));
    CHECK_FALSE(grid.is_valid({4, 0}));
    CHECK_FALSE(grid.is_valid({4, 7}));
    // The gap connects the halves.
    const StateIndex index(grid);
    const auto dist = bfs_distances(grid, index, {0, 0});
    for (int d : dist) {
        CHECK(d >= 0);
    }
}

TEST_CASE("state index round-trips and flags walls") {
    const GridSpec grid = GridSpec::bottleneck8(24);
    const StateIndex index(grid);
    CHECK(index.size() == 57);
    for (int i = 0; i < index.size(); ++i) {
        CHECK(index.index_of(index.state(i)) == i);
    }
    CHECK(index.index_of({4, 0}) == -1);
    CHECK(index.index_of({8, 3}) == -1);
}

TEST_CASE("edge membership matches the boundary definition") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    int edge_count = 0;
    for (const State& s : valid_states(grid)) {
        edge_count += is_edge_state(grid, s);
    }
    CHECK(edge_count == 28);
}
