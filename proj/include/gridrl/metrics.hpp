#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridrl/env.hpp"
#include "gridrl/policy_graph.hpp"

namespace gridrl {

enum class Regime { GoalDominant, CompetitorDominated, Fragmented,
                    PartialContested };

enum class SuccessCategory { Zero, Low, Partial, High, Perfect };

std::string to_string(Regime r);
std::string to_string(SuccessCategory c);
Regime regime_from_string(const std::string& s);
SuccessCategory category_from_string(const std::string& s);

// Everything computed for one (condition, seed, goal): the unit row of
// every report.
struct GoalRecord {
    std::string condition;
    int seed = 0;
    State goal;

    double succ_h = 0.0;        // non-goal starts reaching goal within H
    int lgs_count = 0;          // neighbors whose successor is the goal
    double lgs_frac = 0.0;
    int n_neighbors = 0;

    double goal_basin = 0.0;    // fraction over |S|, goal included
    double fail_basin = 0.0;    // 1 - goal_basin
    double comp_basin = 0.0;    // largest non-goal basin fraction
    double dominance = 0.0;     // goal_basin - comp_basin
    std::optional<double> fail_concentration;  // comp/fail, none if fail = 0
    double cycle_basin = 0.0;   // mass in basins of long cycles
    double fp_basin = 0.0;      // mass in basins of non-goal fixed points
    int n_attractors = 0;
    double fragmentation = 0.0;  // 1 - sum of squared basin fractions

    double mean_t_attractor = 0.0;  // mean transient over all states
    double mean_t_goal = 0.0;       // mean transient over the goal basin
    bool goal_basin_trivial = false;  // goal basin is {goal} alone

    Regime regime = Regime::PartialContested;
    SuccessCategory success_category = SuccessCategory::Zero;
};

struct LocalGoalSupport {
    int count = 0;
    double frac = 0.0;
    int n_neighbors = 0;
};

// Fraction of the goal's valid one-step neighbors whose successor is
// the goal. Errors out for an isolated goal (no valid neighbors).
LocalGoalSupport local_goal_support(const SuccessorMap& m,
                                    const GridSpec& grid,
                                    const StateIndex& index, const State& g);

// |horizon success set| / (|S| - 1).
double success_rate(const SuccessorMap& m, int horizon);

struct BasinMetrics {
    double goal_basin = 0.0;
    double fail_basin = 0.0;
    double comp_basin = 0.0;
    double dominance = 0.0;
    std::optional<double> fail_concentration;
    double cycle_basin = 0.0;
    double fp_basin = 0.0;
    int n_attractors = 0;
    double fragmentation = 0.0;
};

// Basin fractions over |S|, computed from integer basin sizes and
// divided once. comp_basin is 0 when no non-goal attractor exists.
BasinMetrics basin_metrics(const GraphDecomposition& d, int num_states);

struct HittingTimes {
    double mean_to_attractor = 0.0;
    double mean_to_goal = 0.0;
    bool goal_basin_trivial = false;
};

HittingTimes hitting_times(const GraphDecomposition& d,
                           std::int32_t goal_index);

// per_goal.csv with the fixed column set. Undefined cells are blank.
void write_per_goal_csv(const std::vector<GoalRecord>& records,
                        const std::string& path);
std::vector<GoalRecord> read_per_goal_csv(const std::string& path);

}  // namespace gridrl
