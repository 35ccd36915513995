#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridrl/census.hpp"
#include "gridrl/trainer.hpp"

namespace gridrl {

enum class FigureMode { None, FirstSeed, All };

std::string to_string(FigureMode m);

// One experiment condition: a training configuration, a seed list, and
// output options. Loadable from a JSON config file.
struct RunConfig {
    std::string condition;      // e.g. open8_td_uniform
    std::string experiment_id;  // e.g. GW8_H16_sparse_HD128_E500_TD
    TrainConfig train;
    std::vector<std::uint64_t> seeds;
    FigureMode figures = FigureMode::None;
    int jobs = 0;  // 0 = hardware concurrency

    // Canonical JSON used for hashing and the manifest echo.
    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
    static RunConfig load(const std::string& path);
    void save(const std::string& path) const;

    // The five canonical conditions, by name.
    static RunConfig canonical(const std::string& name);
    static std::vector<std::string> canonical_names();
};

struct RunResult {
    std::string out_dir;
    std::vector<GoalRecord> records;            // all seeds, (seed, goal) order
    std::vector<SeedSummary> summaries;         // successful seeds only
    std::map<std::uint64_t, std::string> seed_errors;
};

// Full pipeline for one condition: train every seed, run the census,
// write per_goal.csv, seed_summary.csv, distance.csv, the diagnostics
// CSVs, checkpoints, train logs, requested figures, and a manifest
// with a config hash and per-file checksums. A failing seed is logged
// in the manifest and does not abort the others.
RunResult run_condition(const RunConfig& cfg, const std::string& out_dir);

// Aggregates one or more artifact directories produced by
// run_condition into main_performance.csv plus pooled diagnostics
// CSVs (sweep, ranking, strata, taxonomy, crosstab) under out_dir.
void aggregate_report(const std::vector<std::string>& artifact_dirs,
                      const std::string& out_dir);

// FNV-1a over the file's bytes, as fixed-width hex.
std::string file_checksum(const std::string& path);

}  // namespace gridrl
