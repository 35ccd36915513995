#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gridrl/render.hpp"
#include "gridrl/run.hpp"
#include "gridrl/verify.hpp"

namespace fs = std::filesystem;
using namespace gridrl;

namespace {

RunConfig resolve_config(const std::string& config_path,
                         const std::string& condition,
                         const std::vector<std::uint64_t>& seeds, int jobs,
                         const std::string& figures) {
    RunConfig cfg;
    if (!config_path.empty()) {
        cfg = RunConfig::load(config_path);
    } else if (!condition.empty()) {
        cfg = RunConfig::canonical(condition);
    } else {
        throw CLI::ValidationError("either --config or --condition is "
                                   "required");
    }
    if (!seeds.empty()) {
        cfg.seeds = seeds;
    }
    if (jobs > 0) {
        cfg.jobs = jobs;
    }
    if (!figures.empty()) {
        if (figures == "none") {
            cfg.figures = FigureMode::None;
        } else if (figures == "first_seed") {
            cfg.figures = FigureMode::FirstSeed;
        } else if (figures == "all") {
            cfg.figures = FigureMode::All;
        } else {
            throw CLI::ValidationError("--figures must be none, first_seed, "
                                       "or all");
        }
    }
    return cfg;
}

// Re-runs census and diagnostics over an existing artifact directory,
// reading checkpoints and train logs back in.
void rerun_census(const std::string& run_dir) {
    const RunConfig cfg = RunConfig::load(run_dir + "/config.json");
    const StateIndex index(cfg.train.grid);
    const DistanceBins bins = DistanceBins::for_grid(cfg.train.grid);

    std::vector<GoalRecord> records;
    std::vector<SeedSummary> summaries;
    std::vector<SeedDistanceSummary> distances;
    for (std::uint64_t seed : cfg.seeds) {
        const std::string tag = "seed_" + std::to_string(seed);
        const std::string ckpt = run_dir + "/checkpoints/" + tag + ".ckpt";
        if (!fs::exists(ckpt)) {
            std::cerr << "skipping seed " << seed << " (no checkpoint)\n";
            continue;
        }
        const NetParams params = load_checkpoint(ckpt);
        const TrainLog log =
            read_train_log_csv(run_dir + "/logs/" + tag + ".csv");
        const SeedCensus census =
            census_seed(params, cfg.train.grid, index,
                        cfg.train.grid.horizon(), cfg.condition,
                        static_cast<int>(seed));
        records.insert(records.end(), census.records.begin(),
                       census.records.end());
        summaries.push_back(summarize_seed(
            cfg.condition, static_cast<int>(seed), log.train_success(),
            log.last100_success(), census.records, cfg.train.grid));
        distances.push_back(distance_binned_success_seed(
            census.maps, cfg.train.grid, index, cfg.train.grid.horizon(),
            bins));
    }
    if (records.empty()) {
        throw std::runtime_error("no checkpoints found under " + run_dir);
    }
    write_per_goal_csv(records, run_dir + "/per_goal.csv");
    write_seed_summary_csv(summaries, run_dir + "/seed_summary.csv");
    write_distance_csv(cfg.condition, aggregate_distance_bins(distances),
                       run_dir + "/distance.csv");
    std::cout << "census: " << records.size() << " goal records over "
              << summaries.size() << " seeds\n";
}

void run_diagnose(const std::string& run_dir) {
    const auto records = read_per_goal_csv(run_dir + "/per_goal.csv");
    write_ranking_csv(per_seed_ranking(records), run_dir + "/ranking.csv");
    write_strata_csv(stratify(records), run_dir + "/strata.csv");
    write_taxonomy_csv(taxonomy_summary(records), run_dir + "/taxonomy.csv");
    write_crosstab_csv(success_crosstab(records), run_dir + "/crosstab.csv");
    std::cout << "diagnose: wrote ranking, strata, taxonomy, crosstab for "
              << records.size() << " records\n";
}

void run_sweep(const std::string& run_dir) {
    const auto records = read_per_goal_csv(run_dir + "/per_goal.csv");
    const auto rows = threshold_sweep(records);
    write_sweep_csv(rows, run_dir + "/sweep.csv");
    for (const SweepRow& r : rows) {
        std::printf("%s tau=%.3f P=%.3f R=%.3f F1=%.3f acc=%.3f\n",
                    r.condition.c_str(), r.tau, r.precision, r.recall, r.f1,
                    r.accuracy);
    }
}

struct MapArgs {
    std::string run_dir;
    std::string map_csv;
    int seed = 0;
    std::string goal;
    bool all_goals = false;
    std::string out_dir;
};

State parse_goal(const std::string& text) {
    State g;
    if (std::sscanf(text.c_str(), "%d,%d", &g.x, &g.y) != 2) {
        throw CLI::ValidationError("--goal expects x,y");
    }
    return g;
}

void emit_map(const RunConfig& cfg, const NetParams& params,
              const StateIndex& index, const State& goal,
              const std::string& out_dir, int seed) {
    const SuccessorMap m =
        build_successor_map(params, cfg.train.grid, index, goal);
    const GoalRecord rec =
        analyze_map(m, cfg.train.grid, index, cfg.train.grid.horizon(),
                    cfg.condition, seed);
    const GraphDecomposition d = decompose(m);
    const std::string name = policy_map_filename(cfg.condition, seed, goal);
    std::ofstream out(out_dir + "/" + name, std::ios::binary);
    out << render_policy_map(m, d, rec, cfg.train.grid);
    std::cout << out_dir << "/" << name << "\n";
}

void run_map(const MapArgs& args) {
    if (!args.map_csv.empty()) {
        // Render a hand-crafted successor map on an open 8x8 grid
        // unless a run directory supplies the geometry.
        GridSpec grid = GridSpec::open(8, 8, 16);
        std::string condition = "custom";
        if (!args.run_dir.empty()) {
            const RunConfig cfg = RunConfig::load(args.run_dir +
                                                  "/config.json");
            grid = cfg.train.grid;
            condition = cfg.condition;
        }
        const StateIndex index(grid);
        const State goal = parse_goal(args.goal);
        const SuccessorMap m =
            load_successor_map_csv(grid, index, goal, args.map_csv);
        const GoalRecord rec =
            analyze_map(m, grid, index, grid.horizon(), condition, args.seed);
        const GraphDecomposition d = decompose(m);
        const std::string out_dir =
            args.out_dir.empty() ? "." : args.out_dir;
        fs::create_directories(out_dir);
        const std::string name =
            policy_map_filename(condition, args.seed, goal);
        std::ofstream out(out_dir + "/" + name, std::ios::binary);
        out << render_policy_map(m, d, rec, grid);
        std::cout << out_dir << "/" << name << "\n";
        return;
    }

    const RunConfig cfg = RunConfig::load(args.run_dir + "/config.json");
    const StateIndex index(cfg.train.grid);
    const std::string ckpt = args.run_dir + "/checkpoints/seed_" +
                             std::to_string(args.seed) + ".ckpt";
    const NetParams params = load_checkpoint(ckpt);
    const std::string out_dir =
        args.out_dir.empty() ? args.run_dir + "/maps" : args.out_dir;
    fs::create_directories(out_dir);
    if (args.all_goals) {
        for (const State& g : index.states()) {
            emit_map(cfg, params, index, g, out_dir, args.seed);
        }
    } else {
        emit_map(cfg, params, index, parse_goal(args.goal), out_dir,
                 args.seed);
    }
}

int run_verify() {
    bool all_pass = true;
    for (const verify::CheckResult& r : verify::run_all()) {
        std::printf("%-28s %s  %s\n", r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GridWorld goal-conditioned training and policy-graph "
                 "diagnostics"};
    app.require_subcommand(1);

    std::string config_path, condition, out_dir, figures;
    std::vector<std::uint64_t> seeds;
    int jobs = 0;

    auto* train = app.add_subcommand(
        "train", "Train a condition and write the full artifact directory");
    train->add_option("--config", config_path, "JSON config file");
    train->add_option("--condition", condition,
                      "Canonical condition name (alternative to --config)");
    train->add_option("--out", out_dir, "Output directory")->required();
    train->add_option("--seeds", seeds, "Seed list override");
    train->add_option("--jobs", jobs, "Worker threads (0 = auto)");
    train->add_option("--figures", figures,
                      "Figure emission: none, first_seed, all");

    std::string run_dir;
    auto* census = app.add_subcommand(
        "census", "Recompute per-goal records from stored checkpoints");
    census->add_option("--run", run_dir, "Artifact directory")->required();

    auto* diagnose = app.add_subcommand(
        "diagnose", "Recompute ranking, strata, taxonomy, and crosstab");
    diagnose->add_option("--run", run_dir, "Artifact directory")->required();

    auto* sweep = app.add_subcommand(
        "sweep", "Recompute the threshold sweep from per-goal records");
    sweep->add_option("--run", run_dir, "Artifact directory")->required();

    MapArgs map_args;
    auto* map = app.add_subcommand("map", "Render policy-map SVG figures");
    map->add_option("--run", map_args.run_dir, "Artifact directory");
    map->add_option("--map-csv", map_args.map_csv,
                    "Successor map CSV to render instead of a checkpoint");
    map->add_option("--seed", map_args.seed, "Seed to render");
    map->add_option("--goal", map_args.goal, "Goal cell as x,y");
    map->add_flag("--all-goals", map_args.all_goals,
                  "Render every goal of the seed");
    map->add_option("--out", map_args.out_dir, "Output directory");

    std::vector<std::string> report_dirs;
    std::string report_out;
    auto* report = app.add_subcommand(
        "report", "Aggregate artifact directories into summary tables");
    report->add_option("dirs", report_dirs, "Artifact directories")
        ->required();
    report->add_option("--out", report_out, "Output directory")->required();

    app.add_subcommand("verify", "Run the property and oracle suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            const RunConfig cfg =
                resolve_config(config_path, condition, seeds, jobs, figures);
            const RunResult result = run_condition(cfg, out_dir);
            std::cout << "condition " << cfg.condition << ": "
                      << result.summaries.size() << "/" << cfg.seeds.size()
                      << " seeds, " << result.records.size()
                      << " goal records -> " << result.out_dir << "\n";
            for (const auto& [seed, error] : result.seed_errors) {
                std::cerr << "seed " << seed << " failed: " << error << "\n";
            }
        } else if (census->parsed()) {
            rerun_census(run_dir);
        } else if (diagnose->parsed()) {
            run_diagnose(run_dir);
        } else if (sweep->parsed()) {
            run_sweep(run_dir);
        } else if (map->parsed()) {
            run_map(map_args);
        } else if (report->parsed()) {
            aggregate_report(report_dirs, report_out);
            std::cout << "report -> " << report_out << "\n";
        } else {
            return run_verify();
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
