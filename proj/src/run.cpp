#include "gridrl/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "gridrl/render.hpp"

namespace gridrl {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(FigureMode m) {
    switch (m) {
        case FigureMode::None: return "none";
        case FigureMode::FirstSeed: return "first_seed";
        case FigureMode::All: return "all";
    }
    return "?";
}

namespace {

FigureMode figure_mode_from_string(const std::string& s) {
    if (s == "none") return FigureMode::None;
    if (s == "first_seed") return FigureMode::FirstSeed;
    if (s == "all") return FigureMode::All;
    throw std::invalid_argument("unknown figure mode: " + s);
}

json grid_to_json(const GridSpec& grid) {
    json walls = json::array();
    for (const State& w : grid.walls()) {
        walls.push_back({w.x, w.y});
    }
    return {{"width", grid.width()},
            {"height", grid.height()},
            {"horizon", grid.horizon()},
            {"walls", walls}};
}

GridSpec grid_from_json(const json& j) {
    std::vector<State> walls;
    for (const auto& w : j.value("walls", json::array())) {
        walls.push_back({w.at(0).get<int>(), w.at(1).get<int>()});
    }
    return GridSpec(j.at("width").get<int>(), j.at("height").get<int>(),
                    j.at("horizon").get<int>(), walls);
}

}  // namespace

std::string RunConfig::to_json() const {
    json j;
    j["condition"] = condition;
    j["experiment_id"] = experiment_id;
    j["grid"] = grid_to_json(train.grid);
    j["update_rule"] = gridrl::to_string(train.update_rule);
    j["curriculum"] = gridrl::to_string(train.curriculum);
    j["episodes"] = train.episodes;
    j["gamma"] = train.gamma;
    j["eps_init"] = train.eps_init;
    j["eps_min"] = train.eps_min;
    j["eps_decay"] = train.eps_decay;
    j["batch_size"] = train.batch_size;
    j["updates_per_episode_phase"] =
        train.updates_per_episode_phase == UpdatePhase::PerStep ? "per_step"
                                                                : "single";
    j["replay_capacity"] = train.replay_capacity;
    j["seeds"] = seeds;
    j["figures"] = gridrl::to_string(figures);
    // jobs is a runtime flag, not an experiment parameter; it stays out
    // of the config echo so the config hash is execution-independent.
    return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json(const std::string& text) {
    const json j = json::parse(text);
    RunConfig cfg;
    cfg.condition = j.at("condition").get<std::string>();
    cfg.experiment_id = j.value("experiment_id", std::string());
    cfg.train.grid = grid_from_json(j.at("grid"));
    const std::string rule = j.value("update_rule", std::string("td"));
    if (rule != "td" && rule != "mc") {
        throw std::invalid_argument("unknown update rule: " + rule);
    }
    cfg.train.update_rule = rule == "td" ? UpdateRule::TD : UpdateRule::MC;
    const std::string cur = j.value("curriculum", std::string("uniform"));
    if (cur != "uniform" && cur != "edge_biased") {
        throw std::invalid_argument("unknown curriculum: " + cur);
    }
    cfg.train.curriculum =
        cur == "uniform" ? Curriculum::Uniform : Curriculum::EdgeBiased;
    cfg.train.episodes = j.value("episodes", 500);
    cfg.train.gamma = j.value("gamma", 0.99);
    cfg.train.eps_init = j.value("eps_init", 1.0);
    cfg.train.eps_min = j.value("eps_min", 0.05);
    cfg.train.eps_decay = j.value("eps_decay", 0.99);
    cfg.train.batch_size = j.value("batch_size", 128);
    const std::string phase =
        j.value("updates_per_episode_phase", std::string("per_step"));
    if (phase != "per_step" && phase != "single") {
        throw std::invalid_argument("unknown update phase: " + phase);
    }
    cfg.train.updates_per_episode_phase =
        phase == "per_step" ? UpdatePhase::PerStep : UpdatePhase::Single;
    cfg.train.replay_capacity = j.value("replay_capacity", 10000);
    cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    cfg.figures =
        figure_mode_from_string(j.value("figures", std::string("none")));
    cfg.jobs = j.value("jobs", 0);
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void RunConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write config " + path);
    }
    out << to_json();
}

std::vector<std::string> RunConfig::canonical_names() {
    return {"open8_td_uniform", "open8_mc_uniform", "open8_td_edge",
            "open12_td_uniform", "bottleneck_td_uniform"};
}

RunConfig RunConfig::canonical(const std::string& name) {
    RunConfig cfg;
    cfg.condition = name;
    cfg.seeds.resize(20);
    for (int i = 0; i < 20; ++i) {
        cfg.seeds[i] = i;
    }
    cfg.figures = FigureMode::FirstSeed;
    if (name == "open8_td_uniform") {
        cfg.experiment_id = "GW8_H16_sparse_HD128_E500_TD";
        cfg.train.grid = GridSpec::open(8, 8, 16);
    } else if (name == "open8_mc_uniform") {
        cfg.experiment_id = "GW8_H16_sparse_HD128_E500_MC";
        cfg.train.grid = GridSpec::open(8, 8, 16);
        cfg.train.update_rule = UpdateRule::MC;
    } else if (name == "open8_td_edge") {
        cfg.experiment_id = "GW8_H16_sparse_HD128_E500_TD_EDGE";
        cfg.train.grid = GridSpec::open(8, 8, 16);
        cfg.train.curriculum = Curriculum::EdgeBiased;
    } else if (name == "open12_td_uniform") {
        cfg.experiment_id = "GW12_H24_sparse_HD128_E500_TD";
        cfg.train.grid = GridSpec::open(12, 12, 24);
    } else if (name == "bottleneck_td_uniform") {
        cfg.experiment_id = "GW8_H24_sparse_HD128_E500_TD_BN";
        cfg.train.grid = GridSpec::bottleneck8(24);
    } else {
        throw std::invalid_argument("unknown canonical condition: " + name);
    }
    return cfg;
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot checksum " + path);
    }
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        h = fnv1a(std::string_view(buf, static_cast<std::size_t>(in.gcount())),
                  h);
    }
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(h));
    return hex;
}

namespace {

struct SeedOutcome {
    bool ok = false;
    std::string error;
    TrainResult train;
    SeedCensus census;
    SeedDistanceSummary distance;
};

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

}  // namespace

RunResult run_condition(const RunConfig& cfg, const std::string& out_dir) {
    cfg.train.validate();
    if (cfg.seeds.empty()) {
        throw std::invalid_argument("config has no seeds");
    }

    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/checkpoints");
    fs::create_directories(out_dir + "/logs");
    if (cfg.figures != FigureMode::None) {
        fs::create_directories(out_dir + "/maps");
    }

    const StateIndex index(cfg.train.grid);
    const DistanceBins bins = DistanceBins::for_grid(cfg.train.grid);
    const int n_seeds = static_cast<int>(cfg.seeds.size());
    std::vector<SeedOutcome> outcomes(n_seeds);

    // Workers pull seed slots; all file output happens afterwards on
    // the main thread in seed order, so job count never changes bytes.
    std::atomic<int> next_slot{0};
    const int hardware = static_cast<int>(std::thread::hardware_concurrency());
    const int jobs = std::max(
        1, std::min(n_seeds, cfg.jobs > 0 ? cfg.jobs
                                          : (hardware > 0 ? hardware : 1)));
    auto worker = [&]() {
        for (int slot = next_slot.fetch_add(1); slot < n_seeds;
             slot = next_slot.fetch_add(1)) {
            SeedOutcome& out = outcomes[slot];
            try {
                TrainConfig tc = cfg.train;
                tc.seed = cfg.seeds[slot];
                out.train = train_seed(tc);
                out.census = census_seed(
                    out.train.params, cfg.train.grid, index,
                    cfg.train.grid.horizon(), cfg.condition,
                    static_cast<int>(cfg.seeds[slot]));
                out.distance = distance_binned_success_seed(
                    out.census.maps, cfg.train.grid, index,
                    cfg.train.grid.horizon(), bins);
                out.ok = true;
            } catch (const std::exception& e) {
                out.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }

    RunResult result;
    result.out_dir = out_dir;
    std::vector<SeedDistanceSummary> distances;
    std::vector<std::string> written;

    write_text_file(out_dir + "/config.json", cfg.to_json());
    written.push_back("config.json");

    bool first_ok_seed = true;
    for (int slot = 0; slot < n_seeds; ++slot) {
        const std::uint64_t seed = cfg.seeds[slot];
        SeedOutcome& out = outcomes[slot];
        if (!out.ok) {
            result.seed_errors[seed] = out.error;
            continue;
        }
        const std::string seed_tag = "seed_" + std::to_string(seed);
        save_checkpoint(out.train.params,
                        out_dir + "/checkpoints/" + seed_tag + ".ckpt");
        written.push_back("checkpoints/" + seed_tag + ".ckpt");
        write_train_log_csv(out.train.log,
                            out_dir + "/logs/" + seed_tag + ".csv");
        written.push_back("logs/" + seed_tag + ".csv");

        result.records.insert(result.records.end(),
                              out.census.records.begin(),
                              out.census.records.end());
        result.summaries.push_back(summarize_seed(
            cfg.condition, static_cast<int>(seed),
            out.train.log.train_success(), out.train.log.last100_success(),
            out.census.records, cfg.train.grid));
        distances.push_back(out.distance);

        const bool want_figures =
            cfg.figures == FigureMode::All ||
            (cfg.figures == FigureMode::FirstSeed && first_ok_seed);
        if (want_figures) {
            for (std::size_t gi = 0; gi < out.census.maps.size(); ++gi) {
                const SuccessorMap& m = out.census.maps[gi];
                const GoalRecord& rec = out.census.records[gi];
                const GraphDecomposition d = decompose(m);
                const std::string name = policy_map_filename(
                    cfg.condition, static_cast<int>(seed), m.goal);
                write_text_file(out_dir + "/maps/" + name,
                                render_policy_map(m, d, rec, cfg.train.grid));
                written.push_back("maps/" + name);
            }
        }
        first_ok_seed = false;
    }

    if (result.summaries.empty()) {
        throw std::runtime_error("all seeds failed; first error: " +
                                 (result.seed_errors.empty()
                                      ? std::string("unknown")
                                      : result.seed_errors.begin()->second));
    }

    write_per_goal_csv(result.records, out_dir + "/per_goal.csv");
    written.push_back("per_goal.csv");
    write_seed_summary_csv(result.summaries, out_dir + "/seed_summary.csv");
    written.push_back("seed_summary.csv");
    write_distance_csv(cfg.condition, aggregate_distance_bins(distances),
                       out_dir + "/distance.csv");
    written.push_back("distance.csv");

    write_sweep_csv(threshold_sweep(result.records),
                    out_dir + "/sweep.csv");
    written.push_back("sweep.csv");
    write_ranking_csv(per_seed_ranking(result.records),
                      out_dir + "/ranking.csv");
    written.push_back("ranking.csv");
    write_strata_csv(stratify(result.records), out_dir + "/strata.csv");
    written.push_back("strata.csv");
    write_taxonomy_csv(taxonomy_summary(result.records),
                       out_dir + "/taxonomy.csv");
    written.push_back("taxonomy.csv");
    write_crosstab_csv(success_crosstab(result.records),
                       out_dir + "/crosstab.csv");
    written.push_back("crosstab.csv");

    // Manifest with config hash and per-file checksums.
    json manifest;
    manifest["condition"] = cfg.condition;
    manifest["experiment_id"] = cfg.experiment_id;
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a(cfg.to_json())));
    manifest["config_hash"] = hex;
    manifest["seeds"] = cfg.seeds;
    json errors = json::object();
    for (const auto& [seed, message] : result.seed_errors) {
        errors[std::to_string(seed)] = message;
    }
    manifest["seed_errors"] = errors;
    std::sort(written.begin(), written.end());
    json checksums = json::object();
    for (const std::string& rel : written) {
        checksums[rel] = file_checksum(out_dir + "/" + rel);
    }
    manifest["files"] = checksums;
    write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");

    return result;
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

struct ConditionAggregate {
    std::string condition;
    std::vector<SeedSummary> summaries;
};

}  // namespace

void aggregate_report(const std::vector<std::string>& artifact_dirs,
                      const std::string& out_dir) {
    if (artifact_dirs.empty()) {
        throw std::invalid_argument("no artifact directories given");
    }
    std::vector<GoalRecord> all_records;
    std::vector<ConditionAggregate> conditions;
    for (const std::string& dir : artifact_dirs) {
        const std::string per_goal = dir + "/per_goal.csv";
        const std::string summary = dir + "/seed_summary.csv";
        if (!fs::exists(per_goal)) {
            throw std::runtime_error("missing " + per_goal);
        }
        if (!fs::exists(summary)) {
            throw std::runtime_error("missing " + summary);
        }
        const auto records = read_per_goal_csv(per_goal);
        all_records.insert(all_records.end(), records.begin(), records.end());
        ConditionAggregate agg;
        agg.summaries = read_seed_summary_csv(summary);
        agg.condition = agg.summaries.empty() ? std::string()
                                              : agg.summaries.front().condition;
        conditions.push_back(std::move(agg));
    }

    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir + "/main_performance.csv");
        if (!out) {
            throw std::runtime_error("cannot write main_performance.csv");
        }
        out << "condition,n_seeds,train_mean,last100_mean,eval_mean,eval_std,"
               "eval_min,eval_max,edge_mean,interior_mean\n";
        for (const ConditionAggregate& c : conditions) {
            const auto& rows = c.summaries;
            const double n = static_cast<double>(rows.size());
            double train = 0.0, last100 = 0.0, eval = 0.0, edge = 0.0,
                   interior = 0.0;
            double lo = 1.0, hi = 0.0;
            for (const SeedSummary& s : rows) {
                train += s.train_success;
                last100 += s.last100_success;
                eval += s.eval_success;
                edge += s.edge_success;
                interior += s.interior_success;
                lo = std::min(lo, s.eval_success);
                hi = std::max(hi, s.eval_success);
            }
            train /= n;
            last100 /= n;
            eval /= n;
            edge /= n;
            interior /= n;
            double var = 0.0;
            for (const SeedSummary& s : rows) {
                var += (s.eval_success - eval) * (s.eval_success - eval);
            }
            const double stddev = std::sqrt(var / n);
            out << c.condition << ',' << rows.size() << ',' << fmt(train)
                << ',' << fmt(last100) << ',' << fmt(eval) << ','
                << fmt(stddev) << ',' << fmt(lo) << ',' << fmt(hi) << ','
                << fmt(edge) << ',' << fmt(interior) << '\n';
        }
    }

    write_sweep_csv(threshold_sweep(all_records), out_dir + "/sweep.csv");
    write_ranking_csv(per_seed_ranking(all_records),
                      out_dir + "/ranking.csv");
    write_strata_csv(stratify(all_records), out_dir + "/strata.csv");
    write_taxonomy_csv(taxonomy_summary(all_records),
                       out_dir + "/taxonomy.csv");
    write_crosstab_csv(success_crosstab(all_records),
                       out_dir + "/crosstab.csv");
}

}  // namespace gridrl
