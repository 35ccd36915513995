// Acceptance suite: runs every gate criterion end to end, prints one
// PASS/FAIL line per criterion, and exits nonzero on any failure. The
// empirical criteria train the five conditions through the production
// pipeline; the two main open-8 conditions use their full 20 seeds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gridrl/run.hpp"
#include "gridrl/verify.hpp"

using namespace gridrl;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
    int id;
    std::string name;
    bool pass = false;
    std::string detail;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Corpus {
    std::string condition;
    std::vector<GoalRecord> records;
    std::vector<SeedSummary> summaries;

    double eval_mean() const {
        double total = 0.0;
        for (const SeedSummary& s : summaries) {
            total += s.eval_success;
        }
        return total / summaries.size();
    }
};

Corpus train_condition(const std::string& name, int n_seeds,
                       const std::string& out_root) {
    RunConfig cfg = RunConfig::canonical(name);
    cfg.seeds.resize(n_seeds);
    for (int i = 0; i < n_seeds; ++i) {
        cfg.seeds[i] = i;
    }
    cfg.figures = FigureMode::None;
    const auto start = Clock::now();
    const RunResult result = run_condition(cfg, out_root + "/" + name);
    std::printf("  trained %-22s %2d seeds in %6.1f s (eval mean %.3f)\n",
                name.c_str(), n_seeds, seconds_since(start),
                [&] {
                    double t = 0.0;
                    for (const SeedSummary& s : result.summaries) {
                        t += s.eval_success;
                    }
                    return t / result.summaries.size();
                }());
    if (!result.seed_errors.empty()) {
        throw std::runtime_error(name + ": " +
                                 std::to_string(result.seed_errors.size()) +
                                 " seeds failed");
    }
    return {name, result.records, result.summaries};
}

const SweepRow& find_sweep_row(const std::vector<SweepRow>& rows,
                               const std::string& condition, double tau) {
    for (const SweepRow& r : rows) {
        if (r.condition == condition && std::abs(r.tau - tau) < 1e-9) {
            return r;
        }
    }
    throw std::runtime_error("sweep row not found for " + condition);
}

const StratumRow& find_stratum(const std::vector<StratumRow>& rows,
                               const std::string& condition,
                               SupportBand band) {
    for (const StratumRow& r : rows) {
        if (r.condition == condition && r.band == band) {
            return r;
        }
    }
    throw std::runtime_error("stratum row not found for " + condition);
}

}  // namespace

int main() {
    std::vector<Criterion> results;
    const std::string work_root =
        (fs::temp_directory_path() / "gridrl_acceptance").string();
    fs::remove_all(work_root);
    fs::create_directories(work_root);

    // Criterion 1: functional-map decomposition property suite.
    {
        Criterion c{1, "finite-map decomposition vs oracle"};
        const auto start = Clock::now();
        const auto check = verify::check_random_map_decomposition(1000, 200,
                                                                  2026);
        const double elapsed = seconds_since(start);
        c.pass = check.pass && elapsed < 10.0;
        std::ostringstream detail;
        detail << check.detail << ", " << elapsed << " s";
        c.detail = detail.str();
        results.push_back(c);
    }

    // Criterion 4: gradient check (run early; cheap and independent).
    {
        Criterion c{4, "backprop vs central finite differences"};
        const auto start = Clock::now();
        const auto check = verify::check_gradient(100, 2026);
        const double elapsed = seconds_since(start);
        c.pass = check.pass && elapsed < 30.0;
        std::ostringstream detail;
        detail << check.detail << ", " << elapsed << " s";
        c.detail = detail.str();
        results.push_back(c);
    }

    // Criterion 9: fixture metrics against brute-force enumeration.
    {
        Criterion c{9, "hand-oracle metric suite"};
        const auto check = verify::check_fixture_metrics();
        c.pass = check.pass;
        c.detail = check.detail;
        results.push_back(c);
    }

    // Criterion 10: rerun determinism through the full pipeline.
    {
        Criterion c{10, "bit-identical reruns"};
        RunConfig cfg;
        cfg.condition = "determinism_probe";
        cfg.train.grid = GridSpec::open(8, 8, 16);
        cfg.train.episodes = 30;
        cfg.train.batch_size = 64;
        cfg.seeds = {0, 1};
        cfg.figures = FigureMode::FirstSeed;
        cfg.jobs = 2;
        run_condition(cfg, work_root + "/det_a");
        cfg.jobs = 1;
        run_condition(cfg, work_root + "/det_b");
        const bool manifests_equal =
            read_file(work_root + "/det_a/manifest.json") ==
            read_file(work_root + "/det_b/manifest.json");
        const bool per_goal_equal =
            read_file(work_root + "/det_a/per_goal.csv") ==
            read_file(work_root + "/det_b/per_goal.csv");
        const bool svg_equal =
            read_file(work_root +
                      "/det_a/maps/determinism_probe_s0_g3_4.svg") ==
            read_file(work_root +
                      "/det_b/maps/determinism_probe_s0_g3_4.svg");
        c.pass = manifests_equal && per_goal_equal && svg_equal;
        c.detail = manifests_equal ? "manifest, per-goal, and svg bytes equal"
                                   : "outputs differ between reruns";
        results.push_back(c);
    }

    // Train the five corpora through the production pipeline. The two
    // main conditions use the full 20 seeds; the robustness conditions
    // use 6 to stay inside the runtime budget.
    std::vector<Corpus> corpora;
    std::vector<GoalRecord> all_records;
    {
        std::printf("training corpora:\n");
        const auto start = Clock::now();
        corpora.push_back(
            train_condition("open8_td_uniform", 20, work_root));
        corpora.push_back(
            train_condition("open8_mc_uniform", 20, work_root));
        corpora.push_back(train_condition("open8_td_edge", 6, work_root));
        corpora.push_back(train_condition("open12_td_uniform", 6, work_root));
        corpora.push_back(
            train_condition("bottleneck_td_uniform", 6, work_root));
        std::printf("  total training time %.1f s\n", seconds_since(start));
        for (const Corpus& c : corpora) {
            all_records.insert(all_records.end(), c.records.begin(),
                               c.records.end());
        }
    }

    // Criterion 2: zero local support forces zero success, everywhere.
    {
        Criterion c{2, "zero-support obstruction"};
        long violations = 0;
        long zero_support = 0;
        for (const GoalRecord& r : all_records) {
            if (r.lgs_count == 0) {
                ++zero_support;
                violations += (r.succ_h != 0.0);
            }
        }
        const auto sweep = threshold_sweep(all_records);
        bool tau0_exact = true;
        for (const Corpus& corpus : corpora) {
            const SweepRow& row = find_sweep_row(sweep, corpus.condition, 0.0);
            tau0_exact = tau0_exact && row.precision == 1.0 &&
                         !row.zero_predicted_positives;
        }
        const auto random_maps = verify::check_random_grid_maps(300, 2026);
        c.pass = violations == 0 && tau0_exact && random_maps.pass;
        std::ostringstream detail;
        detail << zero_support << " zero-support records, " << violations
               << " violations; tau=0 precision exactly 1.0 on all five "
                  "conditions; random maps: "
               << random_maps.detail;
        c.detail = detail.str();
        results.push_back(c);
    }

    // Criterion 3: positive support is necessary but not sufficient.
    {
        Criterion c{3, "support necessity and non-sufficiency"};
        long violations = 0;
        for (const GoalRecord& r : all_records) {
            if (r.lgs_count > 0 && r.succ_h == 0.0) {
                ++violations;
            }
        }
        const auto witness = verify::check_full_support_witness();
        c.pass = violations == 0 && witness.pass;
        std::ostringstream detail;
        detail << violations << " violations over " << all_records.size()
               << " records; witness " << witness.detail;
        c.detail = detail.str();
        results.push_back(c);
    }

    // Criterion 5: desk-scale reproduction of the aggregate ordering.
    {
        Criterion c{5, "td/mc aggregate reproduction"};
        const double td = corpora[0].eval_mean();
        const double mc = corpora[1].eval_mean();
        c.pass = td >= 0.25 && td <= 0.60 && mc >= 0.08 && mc <= 0.35 &&
                 mc < td;
        std::ostringstream detail;
        detail << "td eval mean " << td << " (want [0.25,0.60]), mc " << mc
               << " (want [0.08,0.35], below td)";
        c.detail = detail.str();
        results.push_back(c);
    }

    // Criterion 6: diagnostic strength on the main trained corpus.
    {
        Criterion c{6, "rule F1 and per-seed AUC"};
        const auto sweep = threshold_sweep(corpora[0].records);
        const SweepRow& row = find_sweep_row(sweep, "open8_td_uniform", 0.5);
        const auto ranking = per_seed_ranking(corpora[0].records);
        double auc_sum = 0.0;
        long auc_n = 0;
        for (const RankingRow& r : ranking) {
            if (r.auc) {
                auc_sum += *r.auc;
                ++auc_n;
            }
        }
        const double mean_auc = auc_n > 0 ? auc_sum / auc_n : 0.0;
        c.pass = row.f1 >= 0.80 && mean_auc >= 0.90 && auc_n > 0;
        std::ostringstream detail;
        detail << "tau=0.5 F1 " << row.f1 << " (want >= 0.80), mean AUC "
               << mean_auc << " over " << auc_n << " seeds (want >= 0.90)";
        c.detail = detail.str();
        results.push_back(c);
    }

    // Criterion 7: stratification ordering per trained condition.
    {
        Criterion c{7, "stratification monotonicity"};
        const auto strata = stratify(all_records);
        bool ok = true;
        std::ostringstream detail;
        for (const Corpus& corpus : corpora) {
            const StratumRow& low =
                find_stratum(strata, corpus.condition, SupportBand::Low);
            const StratumRow& partial =
                find_stratum(strata, corpus.condition, SupportBand::Partial);
            const StratumRow& full =
                find_stratum(strata, corpus.condition, SupportBand::Full);
            const bool bands_present = low.n > 0 && partial.n > 0 &&
                                       full.n > 0;
            const bool succ_order =
                bands_present && *low.mean_succ < *partial.mean_succ &&
                *partial.mean_succ < *full.mean_succ;
            const bool comp_order =
                bands_present && *low.mean_comp_basin > *full.mean_comp_basin;
            if (!(succ_order && comp_order)) {
                ok = false;
                detail << corpus.condition << " out of order; ";
            }
        }
        if (ok) {
            detail << "succ(low)<succ(partial)<succ(full) and "
                      "comp(low)>comp(full) on all five conditions";
        }
        c.pass = ok;
        c.detail = detail.str();
        results.push_back(c);
    }

    // Criterion 8: taxonomy sanity on the trained corpora.
    {
        Criterion c{8, "taxonomy sanity"};
        long goal_dominant = 0, goal_dominant_zero = 0;
        long comp_dom = 0, comp_dom_high = 0;
        for (const GoalRecord& r : all_records) {
            if (r.regime == Regime::GoalDominant) {
                ++goal_dominant;
                goal_dominant_zero +=
                    (r.success_category == SuccessCategory::Zero);
            }
            if (r.regime == Regime::CompetitorDominated) {
                ++comp_dom;
                comp_dom_high +=
                    (r.success_category == SuccessCategory::High ||
                     r.success_category == SuccessCategory::Perfect);
            }
        }
        const double zero_pct =
            goal_dominant > 0
                ? 100.0 * goal_dominant_zero / goal_dominant
                : 0.0;
        c.pass = goal_dominant > 0 && comp_dom > 0 && zero_pct <= 1.0 &&
                 comp_dom_high == 0;
        std::ostringstream detail;
        detail << goal_dominant << " goal-dominant records (" << zero_pct
               << "% zero), " << comp_dom << " competitor-dominated ("
               << comp_dom_high << " high/perfect)";
        c.detail = detail.str();
        results.push_back(c);
    }

    fs::remove_all(work_root);

    std::sort(results.begin(), results.end(),
              [](const Criterion& a, const Criterion& b) {
                  return a.id < b.id;
              });
    bool all_pass = true;
    std::printf("\n");
    for (const Criterion& c : results) {
        std::printf("criterion %2d %s  %-38s %s\n", c.id,
                    c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all_pass = all_pass && c.pass;
    }
    std::printf("\nacceptance: %s\n", all_pass ? "ALL PASS" : "FAILURES");
    return all_pass ? 0 : 1;
}
