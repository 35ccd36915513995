#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "gridrl/env.hpp"
#include "gridrl/rng.hpp"
#include "gridrl/value_net.hpp"

namespace gridrl {

enum class UpdateRule { TD, MC };
enum class Curriculum { Uniform, EdgeBiased };
enum class UpdatePhase { PerStep, Single };

std::string to_string(UpdateRule r);
std::string to_string(Curriculum c);

struct TrainConfig {
    GridSpec grid = GridSpec::open(8, 8, 16);
    UpdateRule update_rule = UpdateRule::TD;
    Curriculum curriculum = Curriculum::Uniform;
    int episodes = 500;
    double gamma = 0.99;
    double eps_init = 1.0;
    double eps_min = 0.05;
    double eps_decay = 0.99;  // multiplicative, per episode
    int batch_size = 128;
    // PerStep performs one minibatch update per environment step
    // collected in the episode; Single performs one per episode.
    UpdatePhase updates_per_episode_phase = UpdatePhase::PerStep;
    int replay_capacity = 10000;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Transition {
    State s;
    Action a = Action::Up;
    int r = 0;
    State s_next;
    State g;
    bool done = false;
};

// Bounded FIFO; eviction is strictly oldest-first. Minibatches are
// sampled uniformly with replacement from current contents.
template <typename T>
class ReplayBuffer {
  public:
    explicit ReplayBuffer(int capacity) : capacity_(capacity) {
        if (capacity <= 0) {
            throw std::invalid_argument("replay capacity must be positive");
        }
    }

    void push(T item) {
        if (static_cast<int>(items_.size()) == capacity_) {
            items_.pop_front();
        }
        items_.push_back(std::move(item));
    }

    int size() const { return static_cast<int>(items_.size()); }
    int capacity() const { return capacity_; }
    bool empty() const { return items_.empty(); }
    const T& operator[](int i) const { return items_[i]; }

    std::vector<T> sample(int n, Rng& rng) const {
        if (items_.empty()) {
            throw std::logic_error("sampling from empty replay buffer");
        }
        std::vector<T> batch;
        batch.reserve(n);
        for (int i = 0; i < n; ++i) {
            batch.push_back(items_[rng.uniform_index(size())]);
        }
        return batch;
    }

  private:
    int capacity_;
    std::deque<T> items_;
};

struct TrainLog {
    std::vector<std::uint8_t> success;  // per episode
    std::vector<double> loss;           // mean pre-update loss per episode
    std::vector<double> epsilon;

    int episodes() const { return static_cast<int>(success.size()); }
    double train_success() const;
    double last100_success() const;
};

struct StartGoal {
    State start;
    State goal;
};

// Uniform: goal uniform over valid states. Edge-biased: an edge goal
// with probability 0.7, else an interior goal, each uniform within its
// set. The start is uniform over valid states excluding the goal.
StartGoal sample_start_goal(Curriculum curriculum, const GridSpec& grid,
                            Rng& rng);

// With probability epsilon a uniformly random action; otherwise the
// action whose clamped successor has the highest value, ties broken by
// canonical action order.
Action epsilon_greedy_action(const NetParams& p, const GridSpec& grid,
                             const State& s, const State& g, double epsilon,
                             Rng& rng);

struct EpisodeResult {
    std::vector<Transition> transitions;
    bool success = false;
};

// Rolls at most grid.horizon() steps, stopping early on goal entry.
EpisodeResult run_episode(const TrainConfig& config, const NetParams& p,
                          const State& g, const State& s0, double epsilon,
                          Rng& rng);

// One-step bootstrap targets r + gamma * V(s', g), cut to r when done.
std::vector<double> td_targets(const NetParams& p,
                               const std::vector<Transition>& batch,
                               double gamma);

// Realized discounted returns G_t for each step of one trajectory.
std::vector<double> mc_returns(const std::vector<Transition>& trajectory,
                               double gamma);

std::vector<double> make_targets(UpdateRule rule, const NetParams& p,
                                 const std::vector<Transition>& transitions,
                                 double gamma);

struct TrainResult {
    NetParams params;
    TrainLog log;
};

// Full training run for one seed: epsilon-greedy episode generation,
// replay, and one update phase per episode. Deterministic given the
// config. Numeric faults abort with the failing episode index.
TrainResult train_seed(const TrainConfig& config);

void write_train_log_csv(const TrainLog& log, const std::string& path);
TrainLog read_train_log_csv(const std::string& path);

}  // namespace gridrl
