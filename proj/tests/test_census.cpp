#include "doctest.h"

#include <cmath>

#include "gridrl/census.hpp"
#include "gridrl/oracles.hpp"
#include "gridrl/verify.hpp"

using namespace gridrl;

TEST_CASE("census yields one record per goal, deterministically") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const StateIndex index(grid);
    const NetParams p = init_params(1).params;
    const SeedCensus a = census_seed(p, grid, index, 16, "c", 1);
    const SeedCensus b = census_seed(p, grid, index, 16, "c", 1);
    REQUIRE(a.records.size() == 64);
    REQUIRE(a.maps.size() == 64);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].goal == index.state(static_cast<int>(i)));
        CHECK(a.records[i].succ_h == b.records[i].succ_h);
        CHECK(a.maps[i].next == b.maps[i].next);
    }
}

TEST_CASE("zero-parameter census matches the forced up-flow analysis") {
    // All values tie, so every state moves up and clamps at the top
    // row. For goal (gx, gy): the column below the goal drains into it;
    // everything else piles onto the top-row fixed points.
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const StateIndex index(grid);
    const SeedCensus census =
        census_seed(NetParams::zeros(), grid, index, 16, "zero", 0);

    for (const GoalRecord& r : census.records) {
        const int below = grid.height() - 1 - r.goal.y;  // states under goal
        // Only the neighbor directly below enters the goal.
        const int expected_lgs = below > 0 ? 1 : 0;
        CHECK(r.lgs_count == expected_lgs);
        CHECK(r.succ_h ==
              doctest::Approx(static_cast<double>(below) / 63.0)
                  .epsilon(1e-12));
        CHECK(r.goal_basin ==
              doctest::Approx((below + 1) / 64.0).epsilon(1e-12));
        // Attractors: goal, one top-row fixed point per other column,
        // plus this column's top cell when the goal is not on it.
        const int expected_attractors = 7 + 1 + (r.goal.y > 0 ? 1 : 0);
        CHECK(r.n_attractors == expected_attractors);
    }
}

TEST_CASE("edge and interior means split correctly") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    std::vector<GoalRecord> records;
    for (const State& s : valid_states(grid)) {
        GoalRecord r;
        r.goal = s;
        r.succ_h = is_edge_state(grid, s) ? 0.25 : 0.5;
        records.push_back(r);
    }
    const EdgeInteriorSplit split = edge_interior_split(records, grid);
    CHECK(split.n_edge == 28);
    CHECK(split.n_interior == 36);
    CHECK(split.edge_mean_succ == 0.25);
    CHECK(split.interior_mean_succ == 0.5);

    // Weighted mean of the split equals the overall goal mean.
    double overall = 0.0;
    for (const GoalRecord& r : records) {
        overall += r.succ_h;
    }
    overall /= records.size();
    const double weighted = (28.0 * split.edge_mean_succ +
                             36.0 * split.interior_mean_succ) /
                            64.0;
    CHECK(weighted == doctest::Approx(overall).epsilon(1e-12));

    // Uniform success collapses both means to the constant.
    for (GoalRecord& r : records) {
        r.succ_h = 0.375;
    }
    const EdgeInteriorSplit flat = edge_interior_split(records, grid);
    CHECK(flat.edge_mean_succ == 0.375);
    CHECK(flat.interior_mean_succ == 0.375);
}

TEST_CASE("distance bins partition the 8x8 range") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const DistanceBins bins = DistanceBins::for_grid(grid);
    CHECK(bins.short_max == 4);
    CHECK(bins.medium_max == 8);
    for (int d = 1; d <= 14; ++d) {
        const int bin = d <= bins.short_max ? 0 : d <= bins.medium_max ? 1 : 2;
        CHECK(bin >= 0);
        CHECK(bin <= 2);
    }
    const DistanceBins big = DistanceBins::for_grid(GridSpec::open(12, 12, 24));
    CHECK(big.short_max == 6);
    CHECK(big.medium_max == 12);
}

TEST_CASE("per-bin means match a flat per-pair oracle") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const StateIndex index(grid);
    Rng rng(99);
    std::vector<SuccessorMap> maps;
    for (int k = 0; k < 5; ++k) {
        maps.push_back(oracles::random_grid_map(
            grid, index, index.state(rng.uniform_index(index.size())), rng));
    }
    const DistanceBins bins = DistanceBins::for_grid(grid);
    const SeedDistanceSummary summary =
        distance_binned_success_seed(maps, grid, index, 16, bins);

    // Oracle: enumerate every pair with forward rollouts.
    std::array<long, 3> hits{};
    std::array<long, 3> counts{};
    for (const SuccessorMap& m : maps) {
        for (int s = 0; s < index.size(); ++s) {
            if (s == m.goal_index) {
                continue;
            }
            const int d = manhattan(index.state(s), m.goal);
            const int bin = d <= 4 ? 0 : d <= 8 ? 1 : 2;
            ++counts[bin];
            std::int32_t w = s;
            for (int t = 1; t <= 16; ++t) {
                w = m.next[w];
                if (w == m.goal_index) {
                    ++hits[bin];
                    break;
                }
            }
        }
    }
    for (int b = 0; b < 3; ++b) {
        CHECK(summary.count[b] == counts[b]);
        const double expect =
            counts[b] > 0 ? static_cast<double>(hits[b]) / counts[b] : 0.0;
        CHECK(summary.mean[b] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("bottleneck bins use shortest-path distances") {
    const GridSpec grid = GridSpec::bottleneck8(24);
    const StateIndex index(grid);
    // Wall-adjacent pair: Manhattan 2 but BFS routes through the gap.
    const auto dist = bfs_distances(grid, index, {3, 0});
    CHECK(dist[index.index_of({5, 0})] > 2);
    CHECK(dist[index.index_of({5, 0})] ==
          manhattan(State{3, 0}, State{4, 4}) +
              manhattan(State{4, 4}, State{5, 0}));
}

TEST_CASE("seed summary aggregates the record set") {
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const StateIndex index(grid);
    const SeedCensus census =
        census_seed(NetParams::zeros(), grid, index, 16, "zero", 5);
    const SeedSummary summary =
        summarize_seed("zero", 5, 0.25, 0.5, census.records, grid);
    CHECK(summary.condition == "zero");
    CHECK(summary.seed == 5);
    CHECK(summary.train_success == 0.25);
    CHECK(summary.last100_success == 0.5);
    double mean = 0.0;
    for (const GoalRecord& r : census.records) {
        mean += r.succ_h;
    }
    mean /= census.records.size();
    CHECK(summary.eval_success == doctest::Approx(mean).epsilon(1e-12));
}
