#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridrl/policy_graph.hpp"
#include "gridrl/rng.hpp"
#include "gridrl/value_net.hpp"

namespace gridrl {
// Independent slow-path implementations used to cross-check the main
// code. These deliberately avoid sharing logic with the functions they
// check; keep them naive.
namespace oracles {

// Straight-line re-implementation of the three-layer forward pass.
double forward_reference(const NetParams& p, const State& s, const State& g);

// Quadratic-time decomposition: simulate each state |S| steps to land
// on its cycle, then walk the cycle out directly. Attractor indices
// are assigned in the same first-discovery scan order as the fast
// path, so results are directly comparable.
GraphDecomposition decompose_reference(std::span<const std::int32_t> next,
                                       std::int32_t goal_index);

// Uniformly random functional map on n states.
std::vector<std::int32_t> random_functional_map(int n, Rng& rng);

// Random grid successor map: every state maps to itself or a uniformly
// random valid neighbor, with the goal fixed. Exercises the geometry
// the greedy maps live in without a trained network.
SuccessorMap random_grid_map(const GridSpec& grid, const StateIndex& index,
                             const State& goal, Rng& rng);

struct GradientCheckResult {
    int checked = 0;
    int skipped_near_kink = 0;
    double max_rel_error = 0.0;
};

// Central-difference check of the analytic batch gradient on randomly
// sampled coordinates of every tensor. Coordinates whose perturbation
// could cross a rectifier kink are skipped.
GradientCheckResult gradient_check(const NetParams& p,
                                   std::span<const TrainSample> batch,
                                   int coords_per_tensor, Rng& rng,
                                   double step = 1e-5);

// AUC by exhaustive pair counting (half credit for ties): the
// probability that a failing record has lower support than a
// non-failing one.
double pair_count_auc(const std::vector<double>& lgs,
                      const std::vector<bool>& failing);

}  // namespace oracles
}  // namespace gridrl
