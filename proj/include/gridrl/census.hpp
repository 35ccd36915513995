#pragma once

#include <array>
#include <string>
#include <vector>

#include "gridrl/diagnostics.hpp"
#include "gridrl/metrics.hpp"
#include "gridrl/policy_graph.hpp"

namespace gridrl {

// All per-goal analysis products for one trained seed: one record and
// one successor map per valid goal, in row-major goal order.
struct SeedCensus {
    std::vector<GoalRecord> records;
    std::vector<SuccessorMap> maps;
};

// Exhaustive greedy census: for every valid goal, build the successor
// map, decompose it, and compute the full metric, taxonomy, and
// category fields. Also asserts the local-support obstruction facts on
// every map (zero support forces zero success; positive support forces
// positive success).
SeedCensus census_seed(const NetParams& p, const GridSpec& grid,
                       const StateIndex& index, int horizon,
                       const std::string& condition, int seed);

std::vector<GoalRecord> evaluate_seed(const NetParams& p, const GridSpec& grid,
                                      int horizon,
                                      const std::string& condition = "",
                                      int seed = 0);

// Builds one record from an already-built successor map. Exposed so
// hand-crafted maps can run through the exact production path.
GoalRecord analyze_map(const SuccessorMap& m, const GridSpec& grid,
                       const StateIndex& index, int horizon,
                       const std::string& condition = "", int seed = 0);

struct EdgeInteriorSplit {
    double edge_mean_succ = 0.0;
    double interior_mean_succ = 0.0;
    long n_edge = 0;
    long n_interior = 0;
};

EdgeInteriorSplit edge_interior_split(const std::vector<GoalRecord>& records,
                                      const GridSpec& grid);

// Distance bin boundaries: short <= short_max, medium <= medium_max,
// long above. Defaults scale with the grid.
struct DistanceBins {
    int short_max = 4;
    int medium_max = 8;

    static DistanceBins for_grid(const GridSpec& grid);
};

inline constexpr int kNumDistanceBins = 3;
extern const char* const kDistanceBinNames[kNumDistanceBins];

// Mean success over all (start, goal) pairs in each distance bin, for
// one seed's maps. Open grids bin by Manhattan distance; grids with
// walls bin by shortest-path distance so walls do not distort bins.
struct SeedDistanceSummary {
    std::array<double, kNumDistanceBins> mean{};
    std::array<long, kNumDistanceBins> count{};
};

SeedDistanceSummary distance_binned_success_seed(
    const std::vector<SuccessorMap>& maps, const GridSpec& grid,
    const StateIndex& index, int horizon, const DistanceBins& bins);

struct DistanceBinStats {
    std::string bin;
    double mean = 0.0;  // across seeds of per-seed bin means
    double stddev = 0.0;
};

std::vector<DistanceBinStats> aggregate_distance_bins(
    const std::vector<SeedDistanceSummary>& per_seed);

struct SeedSummary {
    std::string condition;
    int seed = 0;
    double train_success = 0.0;
    double last100_success = 0.0;
    double eval_success = 0.0;  // mean of per-goal succ_H
    double edge_success = 0.0;
    double interior_success = 0.0;
};

SeedSummary summarize_seed(const std::string& condition, int seed,
                           double train_success, double last100_success,
                           const std::vector<GoalRecord>& records,
                           const GridSpec& grid);

void write_seed_summary_csv(const std::vector<SeedSummary>& rows,
                            const std::string& path);
std::vector<SeedSummary> read_seed_summary_csv(const std::string& path);

void write_distance_csv(const std::string& condition,
                        const std::vector<DistanceBinStats>& rows,
                        const std::string& path);

}  // namespace gridrl
