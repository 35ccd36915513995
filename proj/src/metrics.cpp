#include "gridrl/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gridrl {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::GoalDominant: return "goal_dominant";
        case Regime::CompetitorDominated: return "competitor_dominated";
        case Regime::Fragmented: return "fragmented";
        case Regime::PartialContested: return "partial_contested";
    }
    return "?";
}

std::string to_string(SuccessCategory c) {
    switch (c) {
        case SuccessCategory::Zero: return "zero";
        case SuccessCategory::Low: return "low";
        case SuccessCategory::Partial: return "partial";
        case SuccessCategory::High: return "high";
        case SuccessCategory::Perfect: return "perfect";
    }
    return "?";
}

Regime regime_from_string(const std::string& s) {
    if (s == "goal_dominant") return Regime::GoalDominant;
    if (s == "competitor_dominated") return Regime::CompetitorDominated;
    if (s == "fragmented") return Regime::Fragmented;
    if (s == "partial_contested") return Regime::PartialContested;
    throw std::invalid_argument("unknown regime: " + s);
}

SuccessCategory category_from_string(const std::string& s) {
    if (s == "zero") return SuccessCategory::Zero;
    if (s == "low") return SuccessCategory::Low;
    if (s == "partial") return SuccessCategory::Partial;
    if (s == "high") return SuccessCategory::High;
    if (s == "perfect") return SuccessCategory::Perfect;
    throw std::invalid_argument("unknown success category: " + s);
}

LocalGoalSupport local_goal_support(const SuccessorMap& m,
                                    const GridSpec& grid,
                                    const StateIndex& index, const State& g) {
    const std::vector<State> nbrs = neighbors(grid, g);
    if (nbrs.empty()) {
        throw std::invalid_argument("goal " + to_string(g) +
                                    " has no valid neighbors; local support "
                                    "is undefined");
    }
    LocalGoalSupport out;
    out.n_neighbors = static_cast<int>(nbrs.size());
    for (const State& s : nbrs) {
        out.count += (m.next[index.index_of(s)] == m.goal_index);
    }
    out.frac = static_cast<double>(out.count) / out.n_neighbors;
    return out;
}

double success_rate(const SuccessorMap& m, int horizon) {
    const int n = static_cast<int>(m.next.size());
    if (n < 2) {
        throw std::invalid_argument("success rate needs at least two states");
    }
    const auto reached = horizon_success_set(m, horizon);
    return static_cast<double>(reached.size()) / (n - 1);
}

BasinMetrics basin_metrics(const GraphDecomposition& d, int num_states) {
    const int num_attractors = static_cast<int>(d.attractors.size());
    std::vector<std::int64_t> sizes(num_attractors, 0);
    for (std::int32_t b : d.basin_of) {
        ++sizes[b];
    }

    std::int64_t goal_size = 0;
    std::int64_t max_non_goal = 0;
    std::int64_t cycle_mass = 0;
    std::int64_t fp_mass = 0;
    std::int64_t sq_sum = 0;
    for (int i = 0; i < num_attractors; ++i) {
        sq_sum += sizes[i] * sizes[i];
        switch (d.attractors[i].kind) {
            case AttractorKind::Goal:
                goal_size = sizes[i];
                break;
            case AttractorKind::SpuriousFixedPoint:
                fp_mass += sizes[i];
                max_non_goal = std::max(max_non_goal, sizes[i]);
                break;
            case AttractorKind::Cycle:
                cycle_mass += sizes[i];
                max_non_goal = std::max(max_non_goal, sizes[i]);
                break;
        }
    }

    const double total = static_cast<double>(num_states);
    BasinMetrics out;
    out.goal_basin = goal_size / total;
    out.fail_basin = static_cast<double>(num_states - goal_size) / total;
    out.comp_basin = max_non_goal / total;
    out.dominance = static_cast<double>(goal_size - max_non_goal) / total;
    if (goal_size < num_states) {
        out.fail_concentration =
            static_cast<double>(max_non_goal) / (num_states - goal_size);
    }
    out.cycle_basin = cycle_mass / total;
    out.fp_basin = fp_mass / total;
    out.n_attractors = num_attractors;
    out.fragmentation = 1.0 - static_cast<double>(sq_sum) / (total * total);
    return out;
}

HittingTimes hitting_times(const GraphDecomposition& d,
                           std::int32_t goal_index) {
    HittingTimes out;
    std::int64_t total = 0;
    for (std::int32_t t : d.transient) {
        total += t;
    }
    out.mean_to_attractor =
        static_cast<double>(total) / static_cast<double>(d.transient.size());

    if (goal_index < 0) {
        out.goal_basin_trivial = true;
        return out;
    }
    const std::int32_t goal_attractor = d.basin_of[goal_index];
    std::int64_t goal_total = 0;
    std::int64_t goal_count = 0;
    for (std::size_t s = 0; s < d.basin_of.size(); ++s) {
        if (d.basin_of[s] == goal_attractor) {
            goal_total += d.transient[s];
            ++goal_count;
        }
    }
    out.mean_to_goal = static_cast<double>(goal_total) /
                       static_cast<double>(goal_count);
    out.goal_basin_trivial = (goal_count == 1);
    return out;
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

constexpr const char* kPerGoalHeader =
    "condition,seed,goal_x,goal_y,succ_H,lgs_count,lgs_frac,n_neighbors,"
    "goal_basin,fail_basin,comp_basin,dominance,fail_concentration,"
    "cycle_basin,fp_basin,n_attractors,fragmentation,mean_t_attractor,"
    "mean_t_goal,regime,success_category";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

}  // namespace

void write_per_goal_csv(const std::vector<GoalRecord>& records,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << kPerGoalHeader << '\n';
    for (const GoalRecord& r : records) {
        out << r.condition << ',' << r.seed << ',' << r.goal.x << ','
            << r.goal.y << ',' << fmt(r.succ_h) << ',' << r.lgs_count << ','
            << fmt(r.lgs_frac) << ',' << r.n_neighbors << ','
            << fmt(r.goal_basin) << ',' << fmt(r.fail_basin) << ','
            << fmt(r.comp_basin) << ',' << fmt(r.dominance) << ','
            << (r.fail_concentration ? fmt(*r.fail_concentration) : "") << ','
            << fmt(r.cycle_basin) << ',' << fmt(r.fp_basin) << ','
            << r.n_attractors << ',' << fmt(r.fragmentation) << ','
            << fmt(r.mean_t_attractor) << ',' << fmt(r.mean_t_goal) << ','
            << to_string(r.regime) << ',' << to_string(r.success_category)
            << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

std::vector<GoalRecord> read_per_goal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != kPerGoalHeader) {
        throw std::runtime_error("bad per-goal header in " + path);
    }
    std::vector<GoalRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 21) {
            throw std::runtime_error("bad per-goal row in " + path + ": " +
                                     line);
        }
        GoalRecord r;
        r.condition = f[0];
        r.seed = std::stoi(f[1]);
        r.goal = {std::stoi(f[2]), std::stoi(f[3])};
        r.succ_h = std::stod(f[4]);
        r.lgs_count = std::stoi(f[5]);
        r.lgs_frac = std::stod(f[6]);
        r.n_neighbors = std::stoi(f[7]);
        r.goal_basin = std::stod(f[8]);
        r.fail_basin = std::stod(f[9]);
        r.comp_basin = std::stod(f[10]);
        r.dominance = std::stod(f[11]);
        if (!f[12].empty()) {
            r.fail_concentration = std::stod(f[12]);
        }
        r.cycle_basin = std::stod(f[13]);
        r.fp_basin = std::stod(f[14]);
        r.n_attractors = std::stoi(f[15]);
        r.fragmentation = std::stod(f[16]);
        r.mean_t_attractor = std::stod(f[17]);
        r.mean_t_goal = std::stod(f[18]);
        r.regime = regime_from_string(f[19]);
        r.success_category = category_from_string(f[20]);
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace gridrl
