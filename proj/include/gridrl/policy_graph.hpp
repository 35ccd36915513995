#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gridrl/env.hpp"
#include "gridrl/value_net.hpp"

namespace gridrl {

// Goal-indexed greedy successor map, total on the valid state set.
// States are compact indices from a StateIndex over the same grid. The
// goal maps to itself (absorbing convention); every other successor is
// the clamped one-step move of the greedy action.
struct SuccessorMap {
    State goal;
    std::int32_t goal_index = -1;
    std::vector<std::int32_t> next;
};

enum class AttractorKind { Goal, SpuriousFixedPoint, Cycle };

// A directed cycle of the map, stored in orbit order starting from its
// lexicographically smallest state so decompositions compare equal
// across runs.
struct Attractor {
    std::vector<std::int32_t> states;
    AttractorKind kind = AttractorKind::Cycle;

    friend bool operator==(const Attractor&, const Attractor&) = default;
};

// Attractors, basin assignment, and transient distances for one map.
// Basins partition the state set; transient(s) counts applications of
// the map until the orbit of s first enters its attractor.
struct GraphDecomposition {
    std::vector<Attractor> attractors;
    std::vector<std::int32_t> basin_of;
    std::vector<std::int32_t> transient;

    int basin_size(int attractor_idx) const;

    friend bool operator==(const GraphDecomposition&,
                           const GraphDecomposition&) = default;
};

// Greedy one-step successor: argmax over actions of the value of the
// clamped next state, ties broken by canonical action order (first
// maximum wins). Returns g itself when s == g.
State greedy_successor(const NetParams& p, const GridSpec& grid,
                       const State& s, const State& g);

// The greedy action behind greedy_successor (undefined for s == g).
Action greedy_action(const NetParams& p, const GridSpec& grid, const State& s,
                     const State& g);

SuccessorMap build_successor_map(const NetParams& p, const GridSpec& grid,
                                 const StateIndex& index, const State& g);

// Attractor-basin decomposition of an arbitrary functional map by
// forward iteration with walk coloring; amortized linear time.
// goal_index < 0 means no goal (attractors are fixed points or cycles).
GraphDecomposition decompose(std::span<const std::int32_t> next,
                             std::int32_t goal_index);
GraphDecomposition decompose(const SuccessorMap& m);

// Non-goal start states whose orbit reaches the goal within H steps,
// via depth-capped breadth-first search over reversed edges. Sorted.
std::vector<std::int32_t> horizon_success_set(const SuccessorMap& m,
                                              int horizon);

// Same set by direct forward rollouts; kept as the slow second route.
std::vector<std::int32_t> horizon_success_set_forward(const SuccessorMap& m,
                                                      int horizon);

// CSV form (x,y,next_x,next_y), one row per valid state, row-major.
void save_successor_map_csv(const SuccessorMap& m, const StateIndex& index,
                            const std::string& path);
SuccessorMap load_successor_map_csv(const GridSpec& grid,
                                    const StateIndex& index, const State& goal,
                                    const std::string& path);

}  // namespace gridrl
