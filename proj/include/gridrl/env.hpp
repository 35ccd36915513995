#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

namespace gridrl {

// Cell coordinates. x is the column, y is the row. Up decreases y, Down
// increases y, Left decreases x, Right increases x. This convention is
// frozen; greedy tie-breaking depends on it.
struct State {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const State&, const State&) = default;
};

// Canonical action order. Tie-breaks always pick the first maximum in
// this order, so it must never change.
enum class Action : int { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr int kNumActions = 4;

constexpr std::array<Action, 4> all_actions() {
    return {Action::Up, Action::Down, Action::Left, Action::Right};
}

// Grid geometry, wall set, and rollout horizon. Valid states are the
// non-wall cells.
class GridSpec {
  public:
    GridSpec(int width, int height, int horizon,
             std::span<const State> walls = {});

    static GridSpec open(int width, int height, int horizon);
    // 8x8 grid with a vertical wall at column 4 and a one-cell gap at
    // row 4. This layout is a configurable default, not a canonical one.
    static GridSpec bottleneck8(int horizon = 24);

    int width() const { return width_; }
    int height() const { return height_; }
    int horizon() const { return horizon_; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }
    bool is_wall(int x, int y) const { return wall_mask_[cell(x, y)] != 0; }
    bool is_valid(const State& s) const {
        return in_bounds(s.x, s.y) && !is_wall(s.x, s.y);
    }

    int num_valid_states() const { return num_valid_; }
    std::vector<State> walls() const;

  private:
    int cell(int x, int y) const { return y * width_ + x; }

    int width_;
    int height_;
    int horizon_;
    int num_valid_;
    std::vector<std::uint8_t> wall_mask_;
};

struct StepResult {
    State next;
    int reward = 0;  // 1 iff next == goal
};

// One deterministic transition. Off-grid or into-wall moves leave the
// agent in place.
State step(const GridSpec& grid, const State& s, Action a);

// Transition plus the sparse goal reward.
StepResult step(const GridSpec& grid, const State& s, Action a,
                const State& goal);

// All valid states in row-major order (y outer, x inner).
std::vector<State> valid_states(const GridSpec& grid);

// Valid cells at Manhattan distance 1 from g. Never contains g.
std::vector<State> neighbors(const GridSpec& grid, const State& g);

int manhattan(const State& a, const State& b);

// True for states on the grid boundary (x or y at an extreme).
bool is_edge_state(const GridSpec& grid, const State& s);

// Compact indexing of the valid state set, in row-major order. Analysis
// code works on compact indices; the grid owns the geometry.
class StateIndex {
  public:
    explicit StateIndex(const GridSpec& grid);

    int size() const { return static_cast<int>(states_.size()); }
    const State& state(int idx) const { return states_[idx]; }
    const std::vector<State>& states() const { return states_; }
    // -1 for walls / out of bounds.
    int index_of(const State& s) const;

  private:
    int width_;
    int height_;
    std::vector<State> states_;
    std::vector<std::int32_t> compact_;  // cell -> compact index or -1
};

// Shortest-path distances from src through valid cells (four-neighbor
// BFS). Unreachable states get -1. Used for wall-aware distance binning.
std::vector<int> bfs_distances(const GridSpec& grid, const StateIndex& index,
                               const State& src);

std::string to_string(const State& s);
std::string to_string(Action a);

}  // namespace gridrl
