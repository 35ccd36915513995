#include "gridrl/env.hpp"

#include <array>
#include <stdexcept>

namespace gridrl {

GridSpec::GridSpec(int width, int height, int horizon,
                   std::span<const State> walls)
    : width_(width), height_(height), horizon_(horizon) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("grid dimensions must be positive");
    }
    if (horizon <= 0) {
        throw std::invalid_argument("horizon must be positive");
    }
    wall_mask_.assign(static_cast<std::size_t>(width) * height, 0);
    for (const State& w : walls) {
        if (!in_bounds(w.x, w.y)) {
            throw std::invalid_argument("wall cell " + to_string(w) +
                                        " is outside the grid");
        }
        wall_mask_[cell(w.x, w.y)] = 1;
    }
    num_valid_ = 0;
    for (std::uint8_t m : wall_mask_) {
        num_valid_ += (m == 0);
    }
    if (num_valid_ == 0) {
        throw std::invalid_argument("grid has no valid states");
    }
}

GridSpec GridSpec::open(int width, int height, int horizon) {
    return GridSpec(width, height, horizon);
}

GridSpec GridSpec::bottleneck8(int horizon) {
    std::vector<State> walls;
    for (int y = 0; y < 8; ++y) {
        if (y != 4) {
            walls.push_back({4, y});
        }
    }
    return GridSpec(8, 8, horizon, walls);
}

std::vector<State> GridSpec::walls() const {
    std::vector<State> out;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (wall_mask_[cell(x, y)]) {
                out.push_back({x, y});
            }
        }
    }
    return out;
}

namespace {
constexpr std::array<int, kNumActions> kDx = {0, 0, -1, 1};
constexpr std::array<int, kNumActions> kDy = {-1, 1, 0, 0};
}  // namespace

State step(const GridSpec& grid, const State& s, Action a) {
    if (!grid.is_valid(s)) {
        throw std::invalid_argument("step from invalid state " + to_string(s));
    }
    const int ai = static_cast<int>(a);
    const State target{s.x + kDx[ai], s.y + kDy[ai]};
    return grid.is_valid(target) ? target : s;
}

StepResult step(const GridSpec& grid, const State& s, Action a,
                const State& goal) {
    const State next = step(grid, s, a);
    return {next, next == goal ? 1 : 0};
}

std::vector<State> valid_states(const GridSpec& grid) {
    std::vector<State> out;
    out.reserve(grid.num_valid_states());
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            if (!grid.is_wall(x, y)) {
                out.push_back({x, y});
            }
        }
    }
    return out;
}

std::vector<State> neighbors(const GridSpec& grid, const State& g) {
    if (!grid.is_valid(g)) {
        throw std::invalid_argument("neighbors of invalid state " +
                                    to_string(g));
    }
    std::vector<State> out;
    for (Action a : all_actions()) {
        const int ai = static_cast<int>(a);
        const State n{g.x + kDx[ai], g.y + kDy[ai]};
        if (grid.is_valid(n)) {
            out.push_back(n);
        }
    }
    return out;
}

int manhattan(const State& a, const State& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

bool is_edge_state(const GridSpec& grid, const State& s) {
    return s.x == 0 || s.x == grid.width() - 1 || s.y == 0 ||
           s.y == grid.height() - 1;
}

StateIndex::StateIndex(const GridSpec& grid)
    : width_(grid.width()), height_(grid.height()) {
    states_ = valid_states(grid);
    compact_.assign(static_cast<std::size_t>(width_) * height_, -1);
    for (std::size_t i = 0; i < states_.size(); ++i) {
        compact_[states_[i].y * width_ + states_[i].x] =
            static_cast<std::int32_t>(i);
    }
}

int StateIndex::index_of(const State& s) const {
    if (s.x < 0 || s.x >= width_ || s.y < 0 || s.y >= height_) {
        return -1;
    }
    return compact_[s.y * width_ + s.x];
}

std::vector<int> bfs_distances(const GridSpec& grid, const StateIndex& index,
                               const State& src) {
    std::vector<int> dist(index.size(), -1);
    const int s0 = index.index_of(src);
    if (s0 < 0) {
        throw std::invalid_argument("bfs from invalid state " + to_string(src));
    }
    std::vector<int> frontier{s0};
    dist[s0] = 0;
    int d = 0;
    while (!frontier.empty()) {
        std::vector<int> next_frontier;
        ++d;
        for (int idx : frontier) {
            const State s = index.state(idx);
            for (Action a : all_actions()) {
                const State n = step(grid, s, a);
                const int ni = index.index_of(n);
                if (dist[ni] < 0) {
                    dist[ni] = d;
                    next_frontier.push_back(ni);
                }
            }
        }
        frontier = std::move(next_frontier);
    }
    return dist;
}

std::string to_string(const State& s) {
    return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + ")";
}

std::string to_string(Action a) {
    switch (a) {
        case Action::Up: return "up";
        case Action::Down: return "down";
        case Action::Left: return "left";
        case Action::Right: return "right";
    }
    return "?";
}

}  // namespace gridrl
