#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridrl/metrics.hpp"

namespace gridrl {

// A goal is labeled a low-success failure when succ_H < kFailCutoff.
inline constexpr double kFailCutoff = 0.25;

// Thresholds of the rule-based sweep: the attainable support fractions
// for two- to four-neighbor goals, except full support.
inline const std::vector<double> kDefaultTaus = {0.0,       0.25, 1.0 / 3.0,
                                                 0.5, 2.0 / 3.0, 0.75};

// Rules applied in this priority order; exactly one matches.
Regime classify_taxonomy(double goal_basin, double comp_basin,
                         double fragmentation);

SuccessCategory success_category(double succ);

// Predicted failure iff lgs_frac <= tau (boundary inclusive).
bool rule_predict_failure(double lgs_frac, double tau);

struct SweepRow {
    std::string condition;
    double tau = 0.0;
    long tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0;  // 1.0 when nothing is predicted positive
    double recall = 0.0;     // 1.0 when nothing is actually positive
    double f1 = 0.0;
    double accuracy = 0.0;
    bool zero_predicted_positives = false;
};

// One row per (condition, tau); counts over all records of a condition.
std::vector<SweepRow> threshold_sweep(
    const std::vector<GoalRecord>& records,
    const std::vector<double>& taus = kDefaultTaus,
    double fail_cutoff = kFailCutoff);

// How well -lgs ranks failing goals ahead of non-failing ones, for the
// records of a single seed: Mann-Whitney U normalized to [0,1] with
// half-credit ties, computed by average-rank rank sums. Empty when the
// seed has a single class.
std::optional<double> rank_auc(const std::vector<GoalRecord>& seed_records,
                               double fail_cutoff = kFailCutoff);

// Rank correlation between lgs and succ_H within a seed: Pearson on
// average ranks. Empty when either variable has no variance or fewer
// than three records exist.
std::optional<double> spearman_rho(const std::vector<GoalRecord>& seed_records);

// Average ranks (1-based, ties averaged); shared by auc and spearman.
std::vector<double> average_ranks(const std::vector<double>& values);

enum class SupportBand { Low, Partial, Full };

SupportBand support_band(double lgs_frac);
std::string to_string(SupportBand b);

struct StratumRow {
    std::string condition;
    SupportBand band = SupportBand::Low;
    long n = 0;
    // Means over the records of the band; empty when the band is empty.
    std::optional<double> mean_succ;
    std::optional<double> failure_pct;
    std::optional<double> mean_goal_basin;
    std::optional<double> mean_comp_basin;
    std::optional<double> mean_frag;
};

// One row per (condition, band), all three bands always present.
std::vector<StratumRow> stratify(const std::vector<GoalRecord>& records,
                                 double fail_cutoff = kFailCutoff);

struct RankingRow {
    std::string condition;
    int seed = 0;
    std::optional<double> auc;
    std::optional<double> spearman;
    long n_fail = 0;
    long n_ok = 0;
};

std::vector<RankingRow> per_seed_ranking(const std::vector<GoalRecord>& records,
                                         double fail_cutoff = kFailCutoff);

struct TaxonomyRow {
    std::string condition;
    Regime regime = Regime::GoalDominant;
    long n = 0;
    double pct = 0.0;
    std::optional<double> mean_succ;
    std::optional<double> mean_lgs;
    std::optional<double> mean_goal_basin;
    std::optional<double> mean_comp_basin;
    std::optional<double> mean_frag;
};

std::vector<TaxonomyRow> taxonomy_summary(
    const std::vector<GoalRecord>& records);

struct CrosstabRow {
    Regime regime = Regime::GoalDominant;
    // Row percentages over the regime's records; empty when n = 0.
    std::optional<double> zero_pct, low_pct, partial_pct, high_pct,
        perfect_pct;
};

// Success-category composition per regime, pooled over all records.
std::vector<CrosstabRow> success_crosstab(
    const std::vector<GoalRecord>& records);

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path);
void write_ranking_csv(const std::vector<RankingRow>& rows,
                       const std::string& path);
void write_strata_csv(const std::vector<StratumRow>& rows,
                      const std::string& path);
void write_taxonomy_csv(const std::vector<TaxonomyRow>& rows,
                        const std::string& path);
void write_crosstab_csv(const std::vector<CrosstabRow>& rows,
                        const std::string& path);

}  // namespace gridrl
