#include "gridrl/census.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gridrl {

GoalRecord analyze_map(const SuccessorMap& m, const GridSpec& grid,
                       const StateIndex& index, int horizon,
                       const std::string& condition, int seed) {
    GoalRecord r;
    r.condition = condition;
    r.seed = seed;
    r.goal = m.goal;

    const GraphDecomposition d = decompose(m);
    const LocalGoalSupport lgs = local_goal_support(m, grid, index, m.goal);
    r.lgs_count = lgs.count;
    r.lgs_frac = lgs.frac;
    r.n_neighbors = lgs.n_neighbors;
    r.succ_h = success_rate(m, horizon);

    // Local-support obstruction: zero support makes goal entry
    // impossible, and any supported neighbor reaches in one step. A
    // violation here is an implementation bug, not data.
    if (r.lgs_count == 0 && r.succ_h != 0.0) {
        throw std::logic_error("zero local support with positive success at "
                               "goal " + to_string(m.goal));
    }
    if (r.lgs_count > 0 && r.succ_h == 0.0) {
        throw std::logic_error("positive local support with zero success at "
                               "goal " + to_string(m.goal));
    }

    const BasinMetrics b = basin_metrics(d, index.size());
    r.goal_basin = b.goal_basin;
    r.fail_basin = b.fail_basin;
    r.comp_basin = b.comp_basin;
    r.dominance = b.dominance;
    r.fail_concentration = b.fail_concentration;
    r.cycle_basin = b.cycle_basin;
    r.fp_basin = b.fp_basin;
    r.n_attractors = b.n_attractors;
    r.fragmentation = b.fragmentation;

    const HittingTimes h = hitting_times(d, m.goal_index);
    r.mean_t_attractor = h.mean_to_attractor;
    r.mean_t_goal = h.mean_to_goal;
    r.goal_basin_trivial = h.goal_basin_trivial;

    r.regime = classify_taxonomy(r.goal_basin, r.comp_basin, r.fragmentation);
    r.success_category = success_category(r.succ_h);
    return r;
}

SeedCensus census_seed(const NetParams& p, const GridSpec& grid,
                       const StateIndex& index, int horizon,
                       const std::string& condition, int seed) {
    SeedCensus out;
    out.records.reserve(index.size());
    out.maps.reserve(index.size());
    for (const State& g : index.states()) {
        SuccessorMap m = build_successor_map(p, grid, index, g);
        out.records.push_back(
            analyze_map(m, grid, index, horizon, condition, seed));
        out.maps.push_back(std::move(m));
    }
    return out;
}

std::vector<GoalRecord> evaluate_seed(const NetParams& p, const GridSpec& grid,
                                      int horizon,
                                      const std::string& condition,
                                      int seed) {
    const StateIndex index(grid);
    return census_seed(p, grid, index, horizon, condition, seed).records;
}

EdgeInteriorSplit edge_interior_split(const std::vector<GoalRecord>& records,
                                      const GridSpec& grid) {
    EdgeInteriorSplit out;
    double edge_sum = 0.0, interior_sum = 0.0;
    for (const GoalRecord& r : records) {
        if (is_edge_state(grid, r.goal)) {
            edge_sum += r.succ_h;
            ++out.n_edge;
        } else {
            interior_sum += r.succ_h;
            ++out.n_interior;
        }
    }
    out.edge_mean_succ = out.n_edge > 0 ? edge_sum / out.n_edge : 0.0;
    out.interior_mean_succ =
        out.n_interior > 0 ? interior_sum / out.n_interior : 0.0;
    return out;
}

DistanceBins DistanceBins::for_grid(const GridSpec& grid) {
    // 8x8 default: short <= 4, medium 5-8, long >= 9; scaled 1.5x for
    // 12-wide grids.
    if (grid.width() >= 12 || grid.height() >= 12) {
        return {6, 12};
    }
    return {4, 8};
}

const char* const kDistanceBinNames[kNumDistanceBins] = {"short", "medium",
                                                         "long"};

SeedDistanceSummary distance_binned_success_seed(
    const std::vector<SuccessorMap>& maps, const GridSpec& grid,
    const StateIndex& index, int horizon, const DistanceBins& bins) {
    if (bins.short_max < 1 || bins.medium_max <= bins.short_max) {
        throw std::invalid_argument("distance bins must be increasing");
    }
    const bool wall_aware = !grid.walls().empty();

    std::array<long, kNumDistanceBins> hits{};
    std::array<long, kNumDistanceBins> counts{};
    for (const SuccessorMap& m : maps) {
        std::vector<int> dist;
        if (wall_aware) {
            dist = bfs_distances(grid, index, m.goal);
        }
        std::vector<std::uint8_t> reached(index.size(), 0);
        for (std::int32_t s : horizon_success_set(m, horizon)) {
            reached[s] = 1;
        }
        for (int s = 0; s < index.size(); ++s) {
            if (s == m.goal_index) {
                continue;
            }
            const int d = wall_aware ? dist[s]
                                     : manhattan(index.state(s), m.goal);
            if (d < 0) {
                continue;  // unreachable under walls; no bin
            }
            const int bin = d <= bins.short_max ? 0
                            : d <= bins.medium_max ? 1
                                                   : 2;
            counts[bin] += 1;
            hits[bin] += reached[s];
        }
    }

    SeedDistanceSummary out;
    for (int b = 0; b < kNumDistanceBins; ++b) {
        out.count[b] = counts[b];
        out.mean[b] = counts[b] > 0
                          ? static_cast<double>(hits[b]) / counts[b]
                          : 0.0;
    }
    return out;
}

std::vector<DistanceBinStats> aggregate_distance_bins(
    const std::vector<SeedDistanceSummary>& per_seed) {
    std::vector<DistanceBinStats> rows;
    for (int b = 0; b < kNumDistanceBins; ++b) {
        DistanceBinStats row;
        row.bin = kDistanceBinNames[b];
        double sum = 0.0;
        long n = 0;
        for (const SeedDistanceSummary& s : per_seed) {
            if (s.count[b] > 0) {
                sum += s.mean[b];
                ++n;
            }
        }
        row.mean = n > 0 ? sum / n : 0.0;
        double sq = 0.0;
        for (const SeedDistanceSummary& s : per_seed) {
            if (s.count[b] > 0) {
                sq += (s.mean[b] - row.mean) * (s.mean[b] - row.mean);
            }
        }
        row.stddev = n > 0 ? std::sqrt(sq / n) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

SeedSummary summarize_seed(const std::string& condition, int seed,
                           double train_success, double last100_success,
                           const std::vector<GoalRecord>& records,
                           const GridSpec& grid) {
    SeedSummary out;
    out.condition = condition;
    out.seed = seed;
    out.train_success = train_success;
    out.last100_success = last100_success;
    double total = 0.0;
    for (const GoalRecord& r : records) {
        total += r.succ_h;
    }
    out.eval_success = records.empty() ? 0.0 : total / records.size();
    const EdgeInteriorSplit split = edge_interior_split(records, grid);
    out.edge_success = split.edge_mean_succ;
    out.interior_success = split.interior_mean_succ;
    return out;
}

namespace {
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}
}  // namespace

void write_seed_summary_csv(const std::vector<SeedSummary>& rows,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "condition,seed,train_success,last100_success,eval_success,"
           "edge_success,interior_success\n";
    for (const SeedSummary& r : rows) {
        out << r.condition << ',' << r.seed << ',' << fmt(r.train_success)
            << ',' << fmt(r.last100_success) << ',' << fmt(r.eval_success)
            << ',' << fmt(r.edge_success) << ',' << fmt(r.interior_success)
            << '\n';
    }
}

std::vector<SeedSummary> read_seed_summary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::string line;
    if (!std::getline(in, line) ||
        line != "condition,seed,train_success,last100_success,eval_success,"
                "edge_success,interior_success") {
        throw std::runtime_error("bad seed summary header in " + path);
    }
    std::vector<SeedSummary> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        SeedSummary s;
        std::string field;
        std::getline(row, s.condition, ',');
        std::getline(row, field, ',');
        s.seed = std::stoi(field);
        std::getline(row, field, ',');
        s.train_success = std::stod(field);
        std::getline(row, field, ',');
        s.last100_success = std::stod(field);
        std::getline(row, field, ',');
        s.eval_success = std::stod(field);
        std::getline(row, field, ',');
        s.edge_success = std::stod(field);
        std::getline(row, field, ',');
        s.interior_success = std::stod(field);
        rows.push_back(std::move(s));
    }
    return rows;
}

void write_distance_csv(const std::string& condition,
                        const std::vector<DistanceBinStats>& rows,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "condition,bin,mean,std\n";
    for (const DistanceBinStats& r : rows) {
        out << condition << ',' << r.bin << ',' << fmt(r.mean) << ','
            << fmt(r.stddev) << '\n';
    }
}

}  // namespace gridrl
