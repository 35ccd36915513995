#include "gridrl/policy_graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gridrl {

int GraphDecomposition::basin_size(int attractor_idx) const {
    int n = 0;
    for (std::int32_t b : basin_of) {
        n += (b == attractor_idx);
    }
    return n;
}

Action greedy_action(const NetParams& p, const GridSpec& grid, const State& s,
                     const State& g) {
    Action best = Action::Up;
    double best_value = 0.0;
    bool first = true;
    for (Action a : all_actions()) {
        const State next = step(grid, s, a);
        const double v = forward(p, next, g);
        if (first || v > best_value) {
            best = a;
            best_value = v;
            first = false;
        }
    }
    return best;
}

State greedy_successor(const NetParams& p, const GridSpec& grid,
                       const State& s, const State& g) {
    if (s == g) {
        return g;
    }
    return step(grid, s, greedy_action(p, grid, s, g));
}

SuccessorMap build_successor_map(const NetParams& p, const GridSpec& grid,
                                 const StateIndex& index, const State& g) {
    const int gi = index.index_of(g);
    if (gi < 0) {
        throw std::invalid_argument("goal " + to_string(g) +
                                    " is not a valid state");
    }
    SuccessorMap m;
    m.goal = g;
    m.goal_index = gi;
    m.next.resize(index.size());
    for (int i = 0; i < index.size(); ++i) {
        const State succ = greedy_successor(p, grid, index.state(i), g);
        m.next[i] = index.index_of(succ);
    }
    return m;
}

namespace {

// Rotate a cycle so it starts at its smallest state index while keeping
// orbit order. Compact indices are row-major, so the smallest index is
// the lexicographically smallest state.
void canonicalize_cycle(std::vector<std::int32_t>& cycle) {
    const auto smallest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), smallest, cycle.end());
}

AttractorKind classify_attractor(const std::vector<std::int32_t>& cycle,
                                 std::int32_t goal_index) {
    if (cycle.size() == 1) {
        return cycle[0] == goal_index ? AttractorKind::Goal
                                      : AttractorKind::SpuriousFixedPoint;
    }
    return AttractorKind::Cycle;
}

}  // namespace

GraphDecomposition decompose(std::span<const std::int32_t> next,
                             std::int32_t goal_index) {
    const int n = static_cast<int>(next.size());
    GraphDecomposition d;
    d.basin_of.assign(n, -1);
    d.transient.assign(n, -1);

    // walk_pos[s] >= 0 marks s as part of the current walk, at that
    // position. Cleared after each walk finishes.
    std::vector<std::int32_t> walk_pos(n, -1);
    std::vector<std::int32_t> walk;

    for (int start = 0; start < n; ++start) {
        if (d.basin_of[start] >= 0) {
            continue;
        }
        walk.clear();
        std::int32_t s = start;
        while (d.basin_of[s] < 0 && walk_pos[s] < 0) {
            walk_pos[s] = static_cast<std::int32_t>(walk.size());
            walk.push_back(s);
            s = next[s];
        }

        std::int32_t attractor_idx;
        std::int32_t exit_transient;  // transient of the state the walk hit
        std::size_t tail_end = walk.size();
        if (walk_pos[s] >= 0) {
            // Repeat inside the current walk: states from walk_pos[s]
            // onward form a new cycle.
            std::vector<std::int32_t> cycle(walk.begin() + walk_pos[s],
                                            walk.end());
            attractor_idx = static_cast<std::int32_t>(d.attractors.size());
            for (std::int32_t c : cycle) {
                d.basin_of[c] = attractor_idx;
                d.transient[c] = 0;
            }
            tail_end = walk_pos[s];
            exit_transient = 0;
            canonicalize_cycle(cycle);
            d.attractors.push_back(
                {std::move(cycle), AttractorKind::Cycle});
            d.attractors.back().kind =
                classify_attractor(d.attractors.back().states, goal_index);
        } else {
            // Hit a previously assigned state.
            attractor_idx = d.basin_of[s];
            exit_transient = d.transient[s];
        }

        // Walk states before the cycle (or before the assigned state)
        // join the same basin with decreasing distance to it.
        for (std::size_t i = 0; i < tail_end; ++i) {
            d.basin_of[walk[i]] = attractor_idx;
            d.transient[walk[i]] =
                exit_transient + static_cast<std::int32_t>(tail_end - i);
        }
        for (std::int32_t w : walk) {
            walk_pos[w] = -1;
        }
    }
    return d;
}

GraphDecomposition decompose(const SuccessorMap& m) {
    return decompose(m.next, m.goal_index);
}

std::vector<std::int32_t> horizon_success_set(const SuccessorMap& m,
                                              int horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("horizon must be at least 1");
    }
    const int n = static_cast<int>(m.next.size());
    // Reversed adjacency via counting sort on successors.
    std::vector<std::int32_t> pred_count(n, 0);
    for (int s = 0; s < n; ++s) {
        if (s != m.next[s]) {
            ++pred_count[m.next[s]];
        }
    }
    std::vector<std::int32_t> offset(n + 1, 0);
    for (int s = 0; s < n; ++s) {
        offset[s + 1] = offset[s] + pred_count[s];
    }
    std::vector<std::int32_t> preds(offset[n]);
    std::vector<std::int32_t> fill = offset;
    for (int s = 0; s < n; ++s) {
        if (s != m.next[s]) {
            preds[fill[m.next[s]]++] = s;
        }
    }

    std::vector<std::uint8_t> seen(n, 0);
    seen[m.goal_index] = 1;
    std::vector<std::int32_t> frontier{m.goal_index};
    std::vector<std::int32_t> result;
    for (int depth = 1; depth <= horizon && !frontier.empty(); ++depth) {
        std::vector<std::int32_t> next_frontier;
        for (std::int32_t v : frontier) {
            for (std::int32_t i = offset[v]; i < offset[v + 1]; ++i) {
                const std::int32_t u = preds[i];
                if (!seen[u]) {
                    seen[u] = 1;
                    next_frontier.push_back(u);
                    result.push_back(u);
                }
            }
        }
        frontier = std::move(next_frontier);
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<std::int32_t> horizon_success_set_forward(const SuccessorMap& m,
                                                      int horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("horizon must be at least 1");
    }
    std::vector<std::int32_t> result;
    const int n = static_cast<int>(m.next.size());
    for (std::int32_t s0 = 0; s0 < n; ++s0) {
        if (s0 == m.goal_index) {
            continue;
        }
        std::int32_t s = s0;
        for (int t = 1; t <= horizon; ++t) {
            s = m.next[s];
            if (s == m.goal_index) {
                result.push_back(s0);
                break;
            }
        }
    }
    return result;
}

void save_successor_map_csv(const SuccessorMap& m, const StateIndex& index,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write successor map " + path);
    }
    out << "x,y,next_x,next_y\n";
    for (int i = 0; i < index.size(); ++i) {
        const State s = index.state(i);
        const State t = index.state(m.next[i]);
        out << s.x << ',' << s.y << ',' << t.x << ',' << t.y << '\n';
    }
}

SuccessorMap load_successor_map_csv(const GridSpec&, const StateIndex& index,
                                    const State& goal,
                                    const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read successor map " + path);
    }
    SuccessorMap m;
    m.goal = goal;
    m.goal_index = index.index_of(goal);
    if (m.goal_index < 0) {
        throw std::invalid_argument("goal " + to_string(goal) +
                                    " is not a valid state");
    }
    m.next.assign(index.size(), -1);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        State s, t;
        char comma;
        row >> s.x >> comma >> s.y >> comma >> t.x >> comma >> t.y;
        const int si = index.index_of(s);
        const int ti = index.index_of(t);
        if (si < 0 || ti < 0) {
            throw std::runtime_error("successor map row outside valid states: " +
                                     line);
        }
        if (manhattan(s, t) > 1) {
            throw std::runtime_error("successor map row is not a local move: " +
                                     line);
        }
        m.next[si] = ti;
    }
    for (std::int32_t t : m.next) {
        if (t < 0) {
            throw std::runtime_error("successor map is not total: " + path);
        }
    }
    if (m.next[m.goal_index] != m.goal_index) {
        throw std::runtime_error("successor map does not fix the goal");
    }
    return m;
}

}  // namespace gridrl
