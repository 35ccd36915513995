#include "gridrl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

namespace gridrl {

Regime classify_taxonomy(double goal_basin, double comp_basin,
                         double fragmentation) {
    if (goal_basin >= 0.75) {
        return Regime::GoalDominant;
    }
    if (comp_basin >= 0.5 && comp_basin > goal_basin) {
        return Regime::CompetitorDominated;
    }
    if (fragmentation >= 0.3 && goal_basin < 0.75 && comp_basin < 0.5) {
        return Regime::Fragmented;
    }
    return Regime::PartialContested;
}

SuccessCategory success_category(double succ) {
    if (succ < 0.0 || succ > 1.0) {
        throw std::invalid_argument("success rate outside [0,1]");
    }
    if (succ == 0.0) return SuccessCategory::Zero;
    if (succ < 0.25) return SuccessCategory::Low;
    if (succ < 0.75) return SuccessCategory::Partial;
    if (succ < 1.0) return SuccessCategory::High;
    return SuccessCategory::Perfect;
}

bool rule_predict_failure(double lgs_frac, double tau) {
    return lgs_frac <= tau;
}

namespace {

// Stable list of condition names in first-appearance order.
std::vector<std::string> condition_order(
    const std::vector<GoalRecord>& records) {
    std::vector<std::string> order;
    for (const GoalRecord& r : records) {
        if (std::find(order.begin(), order.end(), r.condition) ==
            order.end()) {
            order.push_back(r.condition);
        }
    }
    return order;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace

std::vector<SweepRow> threshold_sweep(const std::vector<GoalRecord>& records,
                                      const std::vector<double>& taus,
                                      double fail_cutoff) {
    if (records.empty()) {
        throw std::invalid_argument("threshold sweep over empty records");
    }
    std::vector<SweepRow> rows;
    for (const std::string& cond : condition_order(records)) {
        for (double tau : taus) {
            SweepRow row;
            row.condition = cond;
            row.tau = tau;
            for (const GoalRecord& r : records) {
                if (r.condition != cond) {
                    continue;
                }
                const bool actual = r.succ_h < fail_cutoff;
                const bool predicted = rule_predict_failure(r.lgs_frac, tau);
                row.tp += (predicted && actual);
                row.fp += (predicted && !actual);
                row.fn += (!predicted && actual);
                row.tn += (!predicted && !actual);
            }
            row.zero_predicted_positives = (row.tp + row.fp == 0);
            row.precision = row.zero_predicted_positives
                                ? 1.0
                                : static_cast<double>(row.tp) /
                                      (row.tp + row.fp);
            row.recall = (row.tp + row.fn == 0)
                             ? 1.0
                             : static_cast<double>(row.tp) / (row.tp + row.fn);
            row.f1 = (row.precision + row.recall == 0.0)
                         ? 0.0
                         : 2.0 * row.precision * row.recall /
                               (row.precision + row.recall);
            const long total = row.tp + row.fp + row.fn + row.tn;
            row.accuracy = static_cast<double>(row.tp + row.tn) / total;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return values[a] < values[b];
                     });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // 1-based ranks i+1 .. j+1 averaged across the tie block.
        const double avg = 0.5 * (static_cast<double>(i + 1) +
                                  static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

std::optional<double> rank_auc(const std::vector<GoalRecord>& seed_records,
                               double fail_cutoff) {
    std::vector<double> lgs;
    std::vector<bool> failing;
    long n_fail = 0;
    for (const GoalRecord& r : seed_records) {
        lgs.push_back(r.lgs_frac);
        failing.push_back(r.succ_h < fail_cutoff);
        n_fail += failing.back();
    }
    const long n_ok = static_cast<long>(seed_records.size()) - n_fail;
    if (n_fail == 0 || n_ok == 0) {
        return std::nullopt;
    }
    const std::vector<double> ranks = average_ranks(lgs);
    double fail_rank_sum = 0.0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (failing[i]) {
            fail_rank_sum += ranks[i];
        }
    }
    // U counts (fail, ok) pairs with lgs_fail > lgs_ok plus half the
    // ties; failures ranked low by lgs means high AUC.
    const double u = fail_rank_sum -
                     0.5 * static_cast<double>(n_fail) * (n_fail + 1);
    return 1.0 - u / (static_cast<double>(n_fail) * n_ok);
}

std::optional<double> spearman_rho(
    const std::vector<GoalRecord>& seed_records) {
    if (seed_records.size() < 3) {
        return std::nullopt;
    }
    std::vector<double> lgs, succ;
    for (const GoalRecord& r : seed_records) {
        lgs.push_back(r.lgs_frac);
        succ.push_back(r.succ_h);
    }
    const std::vector<double> ra = average_ranks(lgs);
    const std::vector<double> rb = average_ranks(succ);
    const double ma = mean_of(ra);
    const double mb = mean_of(rb);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) {
        return std::nullopt;
    }
    return cov / std::sqrt(va * vb);
}

SupportBand support_band(double lgs_frac) {
    if (lgs_frac <= 0.5) return SupportBand::Low;
    if (lgs_frac < 1.0) return SupportBand::Partial;
    return SupportBand::Full;
}

std::string to_string(SupportBand b) {
    switch (b) {
        case SupportBand::Low: return "low";
        case SupportBand::Partial: return "partial";
        case SupportBand::Full: return "full";
    }
    return "?";
}

std::vector<StratumRow> stratify(const std::vector<GoalRecord>& records,
                                 double fail_cutoff) {
    std::vector<StratumRow> rows;
    for (const std::string& cond : condition_order(records)) {
        for (SupportBand band :
             {SupportBand::Low, SupportBand::Partial, SupportBand::Full}) {
            StratumRow row;
            row.condition = cond;
            row.band = band;
            double succ = 0.0, fails = 0.0, goal = 0.0, comp = 0.0,
                   frag = 0.0;
            for (const GoalRecord& r : records) {
                if (r.condition != cond || support_band(r.lgs_frac) != band) {
                    continue;
                }
                ++row.n;
                succ += r.succ_h;
                fails += (r.succ_h < fail_cutoff);
                goal += r.goal_basin;
                comp += r.comp_basin;
                frag += r.fragmentation;
            }
            if (row.n > 0) {
                row.mean_succ = succ / row.n;
                row.failure_pct = 100.0 * fails / row.n;
                row.mean_goal_basin = goal / row.n;
                row.mean_comp_basin = comp / row.n;
                row.mean_frag = frag / row.n;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<RankingRow> per_seed_ranking(const std::vector<GoalRecord>& records,
                                         double fail_cutoff) {
    // (condition, seed) -> records, keeping first-appearance order.
    std::vector<std::pair<std::string, int>> keys;
    std::map<std::pair<std::string, int>, std::vector<GoalRecord>> groups;
    for (const GoalRecord& r : records) {
        const auto key = std::make_pair(r.condition, r.seed);
        if (groups.find(key) == groups.end()) {
            keys.push_back(key);
        }
        groups[key].push_back(r);
    }
    std::vector<RankingRow> rows;
    for (const auto& key : keys) {
        const auto& group = groups[key];
        RankingRow row;
        row.condition = key.first;
        row.seed = key.second;
        for (const GoalRecord& r : group) {
            (r.succ_h < fail_cutoff ? row.n_fail : row.n_ok) += 1;
        }
        row.auc = rank_auc(group, fail_cutoff);
        row.spearman = spearman_rho(group);
        rows.push_back(row);
    }
    return rows;
}

std::vector<TaxonomyRow> taxonomy_summary(
    const std::vector<GoalRecord>& records) {
    std::vector<TaxonomyRow> rows;
    for (const std::string& cond : condition_order(records)) {
        long cond_total = 0;
        for (const GoalRecord& r : records) {
            cond_total += (r.condition == cond);
        }
        for (Regime regime :
             {Regime::GoalDominant, Regime::PartialContested,
              Regime::CompetitorDominated, Regime::Fragmented}) {
            TaxonomyRow row;
            row.condition = cond;
            row.regime = regime;
            double succ = 0.0, lgs = 0.0, goal = 0.0, comp = 0.0, frag = 0.0;
            for (const GoalRecord& r : records) {
                if (r.condition != cond || r.regime != regime) {
                    continue;
                }
                ++row.n;
                succ += r.succ_h;
                lgs += r.lgs_frac;
                goal += r.goal_basin;
                comp += r.comp_basin;
                frag += r.fragmentation;
            }
            row.pct = cond_total > 0 ? 100.0 * row.n / cond_total : 0.0;
            if (row.n > 0) {
                row.mean_succ = succ / row.n;
                row.mean_lgs = lgs / row.n;
                row.mean_goal_basin = goal / row.n;
                row.mean_comp_basin = comp / row.n;
                row.mean_frag = frag / row.n;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<CrosstabRow> success_crosstab(
    const std::vector<GoalRecord>& records) {
    std::vector<CrosstabRow> rows;
    for (Regime regime :
         {Regime::CompetitorDominated, Regime::Fragmented,
          Regime::GoalDominant, Regime::PartialContested}) {
        CrosstabRow row;
        row.regime = regime;
        long n = 0;
        long counts[5] = {0, 0, 0, 0, 0};
        for (const GoalRecord& r : records) {
            if (r.regime != regime) {
                continue;
            }
            ++n;
            ++counts[static_cast<int>(r.success_category)];
        }
        if (n > 0) {
            row.zero_pct = 100.0 * counts[0] / n;
            row.low_pct = 100.0 * counts[1] / n;
            row.partial_pct = 100.0 * counts[2] / n;
            row.high_pct = 100.0 * counts[3] / n;
            row.perfect_pct = 100.0 * counts[4] / n;
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

std::string fmt_opt(const std::optional<double>& x) {
    return x ? fmt(*x) : std::string();
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    return out;
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path) {
    auto out = open_csv(path);
    out << "condition,tau,tp,fp,fn,tn,precision,recall,f1,accuracy\n";
    for (const SweepRow& r : rows) {
        out << r.condition << ',' << fmt(r.tau) << ',' << r.tp << ',' << r.fp
            << ',' << r.fn << ',' << r.tn << ',' << fmt(r.precision) << ','
            << fmt(r.recall) << ',' << fmt(r.f1) << ',' << fmt(r.accuracy)
            << '\n';
    }
}

void write_ranking_csv(const std::vector<RankingRow>& rows,
                       const std::string& path) {
    auto out = open_csv(path);
    out << "condition,seed,auc,spearman,n_fail,n_ok\n";
    for (const RankingRow& r : rows) {
        out << r.condition << ',' << r.seed << ',' << fmt_opt(r.auc) << ','
            << fmt_opt(r.spearman) << ',' << r.n_fail << ',' << r.n_ok
            << '\n';
    }
}

void write_strata_csv(const std::vector<StratumRow>& rows,
                      const std::string& path) {
    auto out = open_csv(path);
    out << "condition,band,n,mean_succ,failure_pct,mean_goal_basin,"
           "mean_comp_basin,mean_frag\n";
    for (const StratumRow& r : rows) {
        out << r.condition << ',' << to_string(r.band) << ',' << r.n << ','
            << fmt_opt(r.mean_succ) << ',' << fmt_opt(r.failure_pct) << ','
            << fmt_opt(r.mean_goal_basin) << ',' << fmt_opt(r.mean_comp_basin)
            << ',' << fmt_opt(r.mean_frag) << '\n';
    }
}

void write_taxonomy_csv(const std::vector<TaxonomyRow>& rows,
                        const std::string& path) {
    auto out = open_csv(path);
    out << "condition,regime,n,pct,mean_succ,mean_lgs,mean_goal_basin,"
           "mean_comp_basin,mean_frag\n";
    for (const TaxonomyRow& r : rows) {
        out << r.condition << ',' << to_string(r.regime) << ',' << r.n << ','
            << fmt(r.pct) << ',' << fmt_opt(r.mean_succ) << ','
            << fmt_opt(r.mean_lgs) << ',' << fmt_opt(r.mean_goal_basin) << ','
            << fmt_opt(r.mean_comp_basin) << ',' << fmt_opt(r.mean_frag)
            << '\n';
    }
}

void write_crosstab_csv(const std::vector<CrosstabRow>& rows,
                        const std::string& path) {
    auto out = open_csv(path);
    out << "regime,zero_pct,low_pct,partial_pct,high_pct,perfect_pct\n";
    for (const CrosstabRow& r : rows) {
        out << to_string(r.regime) << ',' << fmt_opt(r.zero_pct) << ','
            << fmt_opt(r.low_pct) << ',' << fmt_opt(r.partial_pct) << ','
            << fmt_opt(r.high_pct) << ',' << fmt_opt(r.perfect_pct) << '\n';
    }
}

}  // namespace gridrl
