#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridrl/census.hpp"
#include "gridrl/oracles.hpp"

namespace gridrl {
namespace verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Fixed 3x3 fixture maps used across the oracle suites.

// Every state points one step toward the center goal (1,1); corners
// route horizontally first. Single goal attractor, full basin.
SuccessorMap converging_3x3();

// A 2-cycle (0,0) <-> (0,1) captures column 0; the remaining six states
// flow into the center goal (1,1).
SuccessorMap two_basin_3x3();

// Identity map on an open grid: every state is its own attractor.
SuccessorMap identity_map(const GridSpec& grid);

// 5x5 map with full local support at the center goal but a far fixed
// point capturing everything outside the goal's neighborhood.
SuccessorMap full_support_witness();
GridSpec full_support_witness_grid();

// Functional-map decomposition against the quadratic reference on
// uniformly random maps, plus direct orbit simulation of every
// transient and a one-cycle-per-component count.
CheckResult check_random_map_decomposition(int num_maps, int max_states,
                                           std::uint64_t seed);

// Analytic backprop against central finite differences on random
// parameter draws, sampled coordinates per tensor.
CheckResult check_gradient(int draws, std::uint64_t seed,
                           double max_rel_error = 1e-4);

// Production metrics on the 3x3 fixtures against brute-force
// enumeration and frozen hand-computed values; exact equality.
CheckResult check_fixture_metrics();

// Random grid successor maps: zero local support forces zero success,
// positive support forces positive success, reverse-search and forward
// rollout success sets agree, and horizon growth is monotone.
CheckResult check_random_grid_maps(int num_maps, std::uint64_t seed);

// The constructed full-support map still fails from afar.
CheckResult check_full_support_witness();

// The suites behind the `verify` subcommand.
std::vector<CheckResult> run_all(std::uint64_t seed = 7);

}  // namespace verify
}  // namespace gridrl
