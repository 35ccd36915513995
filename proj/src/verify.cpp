#include "gridrl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gridrl {
namespace verify {

namespace {

GridSpec fixture_grid3() { return GridSpec::open(3, 3, 8); }

SuccessorMap map_from_pairs(
    const GridSpec& grid, const State& goal,
    const std::vector<std::pair<State, State>>& moves) {
    const StateIndex index(grid);
    SuccessorMap m;
    m.goal = goal;
    m.goal_index = index.index_of(goal);
    m.next.assign(index.size(), -1);
    for (const auto& [from, to] : moves) {
        m.next[index.index_of(from)] = index.index_of(to);
    }
    for (std::int32_t t : m.next) {
        if (t < 0) {
            throw std::logic_error("fixture map is not total");
        }
    }
    return m;
}

}  // namespace

SuccessorMap converging_3x3() {
    // Corners route horizontally first; edge centers enter the goal.
    return map_from_pairs(fixture_grid3(), {1, 1},
                          {{{0, 0}, {1, 0}},
                           {{1, 0}, {1, 1}},
                           {{2, 0}, {1, 0}},
                           {{0, 1}, {1, 1}},
                           {{1, 1}, {1, 1}},
                           {{2, 1}, {1, 1}},
                           {{0, 2}, {1, 2}},
                           {{1, 2}, {1, 1}},
                           {{2, 2}, {1, 2}}});
}

SuccessorMap two_basin_3x3() {
    return map_from_pairs(fixture_grid3(), {1, 1},
                          {{{0, 0}, {0, 1}},
                           {{0, 1}, {0, 0}},
                           {{0, 2}, {0, 1}},
                           {{1, 0}, {1, 1}},
                           {{2, 0}, {1, 0}},
                           {{1, 1}, {1, 1}},
                           {{2, 1}, {1, 1}},
                           {{1, 2}, {1, 1}},
                           {{2, 2}, {1, 2}}});
}

SuccessorMap identity_map(const GridSpec& grid) {
    const StateIndex index(grid);
    SuccessorMap m;
    m.goal = index.state(0);
    m.goal_index = 0;
    m.next.resize(index.size());
    std::iota(m.next.begin(), m.next.end(), 0);
    return m;
}

GridSpec full_support_witness_grid() { return GridSpec::open(5, 5, 8); }

SuccessorMap full_support_witness() {
    // Center goal with all four neighbors entering it; everything else
    // drains into the fixed point at (0,0), routed around the goal's
    // neighborhood.
    return map_from_pairs(
        full_support_witness_grid(), {2, 2},
        {{{2, 2}, {2, 2}},
         {{2, 1}, {2, 2}},
         {{1, 2}, {2, 2}},
         {{3, 2}, {2, 2}},
         {{2, 3}, {2, 2}},
         {{0, 0}, {0, 0}},
         {{1, 0}, {0, 0}},
         {{2, 0}, {1, 0}},
         {{3, 0}, {2, 0}},
         {{4, 0}, {3, 0}},
         {{0, 1}, {0, 0}},
         {{1, 1}, {1, 0}},
         {{3, 1}, {3, 0}},
         {{4, 1}, {4, 0}},
         {{0, 2}, {0, 1}},
         {{4, 2}, {4, 1}},
         {{0, 3}, {0, 2}},
         {{1, 3}, {0, 3}},
         {{3, 3}, {3, 4}},
         {{4, 3}, {4, 2}},
         {{0, 4}, {0, 3}},
         {{1, 4}, {0, 4}},
         {{2, 4}, {1, 4}},
         {{3, 4}, {2, 4}},
         {{4, 4}, {3, 4}}});
}

namespace {

// Union-find over map edges; used to count cycles per weakly connected
// component independently of the decomposition being checked.
class UnionFind {
  public:
    explicit UnionFind(int n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(int a, int b) { parent_[find(a)] = find(b); }

  private:
    std::vector<int> parent_;
};

std::string fail(const std::string& name, const std::string& detail) {
    return name + ": " + detail;
}

}  // namespace

CheckResult check_random_map_decomposition(int num_maps, int max_states,
                                           std::uint64_t seed) {
    CheckResult result{"random-map-decomposition", false, ""};
    Rng rng = Rng::stream(seed, "verify-decompose");
    for (int k = 0; k < num_maps; ++k) {
        const int n = 1 + rng.uniform_index(max_states);
        const std::vector<std::int32_t> next =
            oracles::random_functional_map(n, rng);
        const GraphDecomposition fast = decompose(next, -1);
        const GraphDecomposition ref = oracles::decompose_reference(next, -1);
        if (!(fast == ref)) {
            result.detail = fail("map " + std::to_string(k),
                                 "fast and reference decompositions differ");
            return result;
        }

        // Orbits must enter their attractor at exactly the recorded
        // transient, not earlier.
        for (int s = 0; s < n; ++s) {
            const Attractor& a = fast.attractors[fast.basin_of[s]];
            std::int32_t w = s;
            for (std::int32_t t = 0; t < fast.transient[s]; ++t) {
                if (std::find(a.states.begin(), a.states.end(), w) !=
                    a.states.end()) {
                    result.detail = fail("map " + std::to_string(k),
                                         "orbit entered attractor early");
                    return result;
                }
                w = next[w];
            }
            if (std::find(a.states.begin(), a.states.end(), w) ==
                a.states.end()) {
                result.detail = fail("map " + std::to_string(k),
                                     "orbit missed attractor at transient");
                return result;
            }
        }

        // Each weakly connected component holds exactly one cycle.
        UnionFind uf(n);
        for (int s = 0; s < n; ++s) {
            uf.unite(s, next[s]);
        }
        std::vector<int> cycles_per_root(n, 0);
        for (const Attractor& a : fast.attractors) {
            ++cycles_per_root[uf.find(a.states[0])];
        }
        std::vector<std::uint8_t> is_root(n, 0);
        for (int s = 0; s < n; ++s) {
            is_root[uf.find(s)] = 1;
        }
        for (int s = 0; s < n; ++s) {
            if (is_root[s] && cycles_per_root[s] != 1) {
                result.detail =
                    fail("map " + std::to_string(k),
                         "component with " +
                             std::to_string(cycles_per_root[s]) + " cycles");
                return result;
            }
        }
    }
    result.pass = true;
    result.detail = std::to_string(num_maps) + " maps up to " +
                    std::to_string(max_states) + " states";
    return result;
}

CheckResult check_gradient(int draws, std::uint64_t seed,
                           double max_rel_error) {
    CheckResult result{"gradient-check", false, ""};
    Rng rng = Rng::stream(seed, "verify-gradient");
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const std::vector<State> states = valid_states(grid);

    double worst = 0.0;
    long checked = 0, skipped = 0;
    for (int k = 0; k < draws; ++k) {
        NetParams p = init_params(rng.next_u64()).params;
        for (double& b : p.b1) {
            b = rng.uniform(-0.5, 0.5);
        }
        for (double& b : p.b2) {
            b = rng.uniform(-0.5, 0.5);
        }
        p.b3 = rng.uniform(-0.5, 0.5);

        std::vector<TrainSample> batch(8);
        for (TrainSample& s : batch) {
            s.s = states[rng.uniform_index(static_cast<int>(states.size()))];
            s.g = states[rng.uniform_index(static_cast<int>(states.size()))];
            s.target = rng.uniform(-1.0, 1.0);
        }
        const auto check = oracles::gradient_check(p, batch, 12, rng);
        worst = std::max(worst, check.max_rel_error);
        checked += check.checked;
        skipped += check.skipped_near_kink;
    }

    std::ostringstream detail;
    detail << checked << " coordinates checked, " << skipped
           << " skipped near kinks, max relative error " << worst;
    result.detail = detail.str();
    result.pass = worst < max_rel_error && checked > 0;
    return result;
}

namespace {

struct FixtureExpect {
    const char* name;
    SuccessorMap map;
    GridSpec grid;
    // Frozen hand-derived values.
    double goal_basin, comp_basin, fragmentation, dominance;
    bool has_fail_concentration;
    double fail_concentration;
    double mean_t_attractor, mean_t_goal;
    int n_attractors;
    double succ_h1, succ_h2, succ_h8;
    int lgs_count;
};

bool metrics_match(const FixtureExpect& fx, std::string& detail) {
    const StateIndex index(fx.grid);
    const int n = index.size();

    // Production route.
    const GraphDecomposition d = decompose(fx.map);
    const BasinMetrics b = basin_metrics(d, n);
    const HittingTimes h = hitting_times(d, fx.map.goal_index);
    const double s1 = success_rate(fx.map, 1);
    const double s2 = success_rate(fx.map, 2);
    const double s8 = success_rate(fx.map, 8);

    // Brute-force route: reference decomposition, direct arithmetic,
    // forward rollouts.
    const GraphDecomposition rd =
        oracles::decompose_reference(fx.map.next, fx.map.goal_index);
    std::vector<long> sizes(rd.attractors.size(), 0);
    for (std::int32_t bi : rd.basin_of) {
        ++sizes[bi];
    }
    long goal_size = 0, max_non_goal = 0, sq = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        sq += sizes[i] * sizes[i];
        if (rd.attractors[i].kind == AttractorKind::Goal) {
            goal_size = sizes[i];
        } else {
            max_non_goal = std::max(max_non_goal, sizes[i]);
        }
    }
    const double ref_goal = static_cast<double>(goal_size) / n;
    const double ref_comp = static_cast<double>(max_non_goal) / n;
    const double ref_frag =
        1.0 - static_cast<double>(sq) /
                  (static_cast<double>(n) * static_cast<double>(n));
    const double ref_dom =
        static_cast<double>(goal_size - max_non_goal) / n;
    long tr_sum = 0;
    for (std::int32_t t : rd.transient) {
        tr_sum += t;
    }
    const double ref_t_attr = static_cast<double>(tr_sum) / n;
    long goal_tr = 0, goal_n = 0;
    for (int s = 0; s < n; ++s) {
        if (rd.basin_of[s] == rd.basin_of[fx.map.goal_index]) {
            goal_tr += rd.transient[s];
            ++goal_n;
        }
    }
    const double ref_t_goal = static_cast<double>(goal_tr) / goal_n;
    const auto fwd1 = horizon_success_set_forward(fx.map, 1);
    const auto fwd2 = horizon_success_set_forward(fx.map, 2);
    const auto fwd8 = horizon_success_set_forward(fx.map, 8);
    const double rs1 = static_cast<double>(fwd1.size()) / (n - 1);
    const double rs2 = static_cast<double>(fwd2.size()) / (n - 1);
    const double rs8 = static_cast<double>(fwd8.size()) / (n - 1);

    auto mismatch = [&](const char* what) {
        detail = std::string(fx.name) + ": " + what;
        return false;
    };

    // Production vs brute force, exact.
    if (b.goal_basin != ref_goal) return mismatch("goal basin vs oracle");
    if (b.comp_basin != ref_comp) return mismatch("comp basin vs oracle");
    if (b.fragmentation != ref_frag) return mismatch("frag vs oracle");
    if (b.dominance != ref_dom) return mismatch("dominance vs oracle");
    if (h.mean_to_attractor != ref_t_attr) {
        return mismatch("mean transient vs oracle");
    }
    if (h.mean_to_goal != ref_t_goal) return mismatch("mean-to-goal vs oracle");
    if (s1 != rs1 || s2 != rs2 || s8 != rs8) {
        return mismatch("succ vs forward rollouts");
    }
    if (b.fail_concentration.has_value()) {
        const double ref_cf =
            static_cast<double>(max_non_goal) / (n - goal_size);
        if (*b.fail_concentration != ref_cf) {
            return mismatch("fail concentration vs oracle");
        }
    }

    // Production vs frozen hand values.
    const double tol = 1e-12;
    auto close = [&](double a, double e) { return std::abs(a - e) <= tol; };
    if (!close(b.goal_basin, fx.goal_basin)) return mismatch("goal basin");
    if (!close(b.comp_basin, fx.comp_basin)) return mismatch("comp basin");
    if (!close(b.fragmentation, fx.fragmentation)) return mismatch("frag");
    if (!close(b.dominance, fx.dominance)) return mismatch("dominance");
    if (b.fail_concentration.has_value() != fx.has_fail_concentration) {
        return mismatch("fail concentration definedness");
    }
    if (fx.has_fail_concentration &&
        !close(*b.fail_concentration, fx.fail_concentration)) {
        return mismatch("fail concentration");
    }
    if (!close(h.mean_to_attractor, fx.mean_t_attractor)) {
        return mismatch("mean transient");
    }
    if (!close(h.mean_to_goal, fx.mean_t_goal)) return mismatch("mean-to-goal");
    if (b.n_attractors != fx.n_attractors) return mismatch("attractor count");
    if (!close(s1, fx.succ_h1) || !close(s2, fx.succ_h2) ||
        !close(s8, fx.succ_h8)) {
        return mismatch("succ values");
    }
    const LocalGoalSupport lgs =
        local_goal_support(fx.map, fx.grid, index, fx.map.goal);
    if (lgs.count != fx.lgs_count) return mismatch("lgs count");
    return true;
}

}  // namespace

CheckResult check_fixture_metrics() {
    CheckResult result{"fixture-metrics", false, ""};

    std::vector<FixtureExpect> fixtures;
    {
        FixtureExpect fx{"converging-3x3",
                         converging_3x3(),
                         fixture_grid3(),
                         /*goal_basin=*/1.0,
                         /*comp_basin=*/0.0,
                         /*fragmentation=*/0.0,
                         /*dominance=*/1.0,
                         /*has_fail_concentration=*/false,
                         /*fail_concentration=*/0.0,
                         /*mean_t_attractor=*/12.0 / 9.0,
                         /*mean_t_goal=*/12.0 / 9.0,
                         /*n_attractors=*/1,
                         /*succ_h1=*/4.0 / 8.0,
                         /*succ_h2=*/1.0,
                         /*succ_h8=*/1.0,
                         /*lgs_count=*/4};
        fixtures.push_back(std::move(fx));
    }
    {
        FixtureExpect fx{"two-basin-3x3",
                         two_basin_3x3(),
                         fixture_grid3(),
                         /*goal_basin=*/6.0 / 9.0,
                         /*comp_basin=*/3.0 / 9.0,
                         /*fragmentation=*/1.0 - 45.0 / 81.0,
                         /*dominance=*/3.0 / 9.0,
                         /*has_fail_concentration=*/true,
                         /*fail_concentration=*/1.0,
                         /*mean_t_attractor=*/8.0 / 9.0,
                         /*mean_t_goal=*/7.0 / 6.0,
                         /*n_attractors=*/2,
                         /*succ_h1=*/3.0 / 8.0,
                         /*succ_h2=*/5.0 / 8.0,
                         /*succ_h8=*/5.0 / 8.0,
                         /*lgs_count=*/3};
        fixtures.push_back(std::move(fx));
    }
    {
        const GridSpec grid = fixture_grid3();
        FixtureExpect fx{"identity-3x3",
                         identity_map(grid),
                         grid,
                         /*goal_basin=*/1.0 / 9.0,
                         /*comp_basin=*/1.0 / 9.0,
                         /*fragmentation=*/1.0 - 9.0 / 81.0,
                         /*dominance=*/0.0,
                         /*has_fail_concentration=*/true,
                         /*fail_concentration=*/1.0 / 8.0,
                         /*mean_t_attractor=*/0.0,
                         /*mean_t_goal=*/0.0,
                         /*n_attractors=*/9,
                         /*succ_h1=*/0.0,
                         /*succ_h2=*/0.0,
                         /*succ_h8=*/0.0,
                         /*lgs_count=*/0};
        fixtures.push_back(std::move(fx));
    }

    for (const FixtureExpect& fx : fixtures) {
        if (!metrics_match(fx, result.detail)) {
            return result;
        }
    }
    result.pass = true;
    result.detail = std::to_string(fixtures.size()) + " fixtures exact";
    return result;
}

CheckResult check_random_grid_maps(int num_maps, std::uint64_t seed) {
    CheckResult result{"random-grid-maps", false, ""};
    Rng rng = Rng::stream(seed, "verify-grid-maps");
    const GridSpec grids[] = {GridSpec::open(8, 8, 16),
                              GridSpec::open(12, 12, 24),
                              GridSpec::bottleneck8(24)};

    long zero_lgs_seen = 0;
    for (int k = 0; k < num_maps; ++k) {
        const GridSpec& grid = grids[k % 3];
        const StateIndex index(grid);
        const State goal =
            index.state(rng.uniform_index(index.size()));
        const SuccessorMap m = oracles::random_grid_map(grid, index, goal, rng);

        const LocalGoalSupport lgs = local_goal_support(m, grid, index, goal);
        const int horizons[] = {1, 2, grid.horizon(), 4 * index.size()};
        std::size_t prev_size = 0;
        for (int h : horizons) {
            const auto fast = horizon_success_set(m, h);
            const auto slow = horizon_success_set_forward(m, h);
            if (fast != slow) {
                result.detail = "reverse search and rollouts disagree";
                return result;
            }
            if (fast.size() < prev_size) {
                result.detail = "success set shrank as horizon grew";
                return result;
            }
            prev_size = fast.size();
            if (lgs.count == 0 && !fast.empty()) {
                result.detail = "zero local support but non-empty success set";
                return result;
            }
            if (lgs.count > 0 && fast.empty()) {
                result.detail = "positive local support but empty success set";
                return result;
            }
        }
        zero_lgs_seen += (lgs.count == 0);

        // At a horizon past every transient, the success set is the
        // goal basin without the goal itself.
        const GraphDecomposition d = decompose(m);
        long basin_non_goal = 0;
        for (int s = 0; s < index.size(); ++s) {
            if (d.basin_of[s] == d.basin_of[m.goal_index] &&
                s != m.goal_index) {
                ++basin_non_goal;
            }
        }
        const auto saturated = horizon_success_set(m, 4 * index.size());
        if (static_cast<long>(saturated.size()) != basin_non_goal) {
            result.detail = "saturated success set is not the goal basin";
            return result;
        }
    }
    result.pass = true;
    result.detail = std::to_string(num_maps) + " random grid maps (" +
                    std::to_string(zero_lgs_seen) + " with zero support)";
    return result;
}

CheckResult check_full_support_witness() {
    CheckResult result{"full-support-witness", false, ""};
    const GridSpec grid = full_support_witness_grid();
    const StateIndex index(grid);
    const SuccessorMap m = full_support_witness();

    const LocalGoalSupport lgs = local_goal_support(m, grid, index, m.goal);
    const GraphDecomposition d = decompose(m);
    const BasinMetrics b = basin_metrics(d, index.size());
    const double succ = success_rate(m, grid.horizon());
    std::ostringstream detail;
    detail << "lgs=" << lgs.frac << " succ=" << succ
           << " comp=" << b.comp_basin;
    result.detail = detail.str();
    result.pass = lgs.frac == 1.0 && succ > 0.0 && succ < 1.0 &&
                  b.comp_basin >= 0.5;
    return result;
}

std::vector<CheckResult> run_all(std::uint64_t seed) {
    std::vector<CheckResult> results;
    results.push_back(check_random_map_decomposition(1000, 200, seed));
    results.push_back(check_gradient(100, seed));
    results.push_back(check_fixture_metrics());
    results.push_back(check_random_grid_maps(300, seed));
    results.push_back(check_full_support_witness());
    return results;
}

}  // namespace verify
}  // namespace gridrl
