#pragma once

#include <string>

#include "gridrl/metrics.hpp"
#include "gridrl/policy_graph.hpp"

namespace gridrl {

// Standalone SVG policy map: one glyph per valid state (a flow arrow,
// or a circular self-loop arrow), the goal drawn as a star, non-goal
// attractor states marked, walls drawn as filled blocks, and a caption
// line "S=<succ> Sup=<lgs count> C=<comp> F=<frag>". Clamped moves
// (successor = source away from the goal) use the wall-hit style.
// Output bytes are deterministic; coordinates use fixed 9-decimal
// formatting.
std::string render_policy_map(const SuccessorMap& m,
                              const GraphDecomposition& d,
                              const GoalRecord& r, const GridSpec& grid);

// Canonical figure file name: <condition>_s<seed>_g<x>_<y>.svg
std::string policy_map_filename(const std::string& condition, int seed,
                                const State& goal);

}  // namespace gridrl
