#include "gridrl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gridrl {

std::string to_string(UpdateRule r) {
    return r == UpdateRule::TD ? "td" : "mc";
}

std::string to_string(Curriculum c) {
    return c == Curriculum::Uniform ? "uniform" : "edge_biased";
}

void TrainConfig::validate() const {
    if (gamma <= 0.0 || gamma > 1.0) {
        throw std::invalid_argument("gamma must be in (0, 1]");
    }
    if (eps_min < 0.0 || eps_min > eps_init || eps_init > 1.0) {
        throw std::invalid_argument("need 0 <= eps_min <= eps_init <= 1");
    }
    if (episodes < 0) {
        throw std::invalid_argument("episodes must be non-negative");
    }
    if (batch_size <= 0) {
        throw std::invalid_argument("batch size must be positive");
    }
    if (grid.num_valid_states() < 2) {
        throw std::invalid_argument("grid needs at least two valid states");
    }
}

double TrainLog::train_success() const {
    if (success.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (std::uint8_t s : success) {
        total += s;
    }
    return total / success.size();
}

double TrainLog::last100_success() const {
    if (success.empty()) {
        return 0.0;
    }
    const int n = std::min<int>(100, static_cast<int>(success.size()));
    double total = 0.0;
    for (int i = static_cast<int>(success.size()) - n;
         i < static_cast<int>(success.size()); ++i) {
        total += success[i];
    }
    return total / n;
}

StartGoal sample_start_goal(Curriculum curriculum, const GridSpec& grid,
                            Rng& rng) {
    const std::vector<State> states = valid_states(grid);
    if (states.size() < 2) {
        throw std::invalid_argument("need at least two valid states");
    }

    State goal;
    if (curriculum == Curriculum::Uniform) {
        goal = states[rng.uniform_index(static_cast<int>(states.size()))];
    } else {
        std::vector<State> edge, interior;
        for (const State& s : states) {
            (is_edge_state(grid, s) ? edge : interior).push_back(s);
        }
        if (edge.empty() || interior.empty()) {
            throw std::invalid_argument(
                "edge-biased curriculum needs non-empty edge and interior "
                "sets");
        }
        if (rng.uniform() < 0.7) {
            goal = edge[rng.uniform_index(static_cast<int>(edge.size()))];
        } else {
            goal = interior[rng.uniform_index(
                static_cast<int>(interior.size()))];
        }
    }

    // Start uniform over valid states excluding the goal.
    State start;
    do {
        start = states[rng.uniform_index(static_cast<int>(states.size()))];
    } while (start == goal);
    return {start, goal};
}

Action epsilon_greedy_action(const NetParams& p, const GridSpec& grid,
                             const State& s, const State& g, double epsilon,
                             Rng& rng) {
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("epsilon must be in [0, 1]");
    }
    if (rng.uniform() < epsilon) {
        return static_cast<Action>(rng.uniform_index(kNumActions));
    }
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

namespace {

void validate_transition(const Transition& t) {
    if ((t.r == 1) != (t.s_next == t.g)) {
        throw std::logic_error("transition reward inconsistent with goal");
    }
    if (t.r == 1 && !t.done) {
        throw std::logic_error("goal-reaching transition must be terminal");
    }
}

}  // namespace

EpisodeResult run_episode(const TrainConfig& config, const NetParams& p,
                          const State& g, const State& s0, double epsilon,
                          Rng& rng) {
    if (s0 == g) {
        throw std::invalid_argument("episode start equals the goal");
    }
    EpisodeResult result;
    State s = s0;
    for (int t = 0; t < config.grid.horizon(); ++t) {
        const Action a =
            epsilon_greedy_action(p, config.grid, s, g, epsilon, rng);
        const StepResult sr = step(config.grid, s, a, g);
        Transition tr;
        tr.s = s;
        tr.a = a;
        tr.r = sr.reward;
        tr.s_next = sr.next;
        tr.g = g;
        tr.done = (sr.reward == 1) || (t + 1 == config.grid.horizon());
        validate_transition(tr);
        result.transitions.push_back(tr);
        if (sr.reward == 1) {
            result.success = true;
            break;
        }
        s = sr.next;
    }
    return result;
}

std::vector<double> td_targets(const NetParams& p,
                               const std::vector<Transition>& batch,
                               double gamma) {
    std::vector<double> inputs;
    inputs.reserve(batch.size() * kInputDim);
    for (const Transition& t : batch) {
        const auto x = encode_input(t.s_next, t.g);
        inputs.insert(inputs.end(), x.begin(), x.end());
    }
    std::vector<double> next_values(batch.size());
    forward_batch(p, inputs, next_values);

    std::vector<double> targets(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        targets[i] = batch[i].done
                         ? static_cast<double>(batch[i].r)
                         : batch[i].r + gamma * next_values[i];
    }
    return targets;
}

std::vector<double> mc_returns(const std::vector<Transition>& trajectory,
                               double gamma) {
    std::vector<double> returns(trajectory.size());
    double g = 0.0;
    for (int t = static_cast<int>(trajectory.size()) - 1; t >= 0; --t) {
        g = trajectory[t].r + gamma * g;
        returns[t] = g;
    }
    return returns;
}

std::vector<double> make_targets(UpdateRule rule, const NetParams& p,
                                 const std::vector<Transition>& transitions,
                                 double gamma) {
    return rule == UpdateRule::TD ? td_targets(p, transitions, gamma)
                                  : mc_returns(transitions, gamma);
}

TrainResult train_seed(const TrainConfig& config) {
    config.validate();

    auto [params, adam] = init_params(config.seed);
    Rng env_rng = Rng::stream(config.seed, "env");
    Rng explore_rng = Rng::stream(config.seed, "explore");
    Rng replay_rng = Rng::stream(config.seed, "replay");

    // TD replays transitions and bootstraps targets at update time; MC
    // replays (input, return) pairs with targets fixed at episode end.
    ReplayBuffer<Transition> transition_replay(config.replay_capacity);
    ReplayBuffer<TrainSample> target_replay(config.replay_capacity);

    TrainResult result;
    result.log.success.reserve(config.episodes);
    result.log.loss.reserve(config.episodes);
    result.log.epsilon.reserve(config.episodes);

    for (int episode = 0; episode < config.episodes; ++episode) {
        const double epsilon =
            std::max(config.eps_min,
                     config.eps_init * std::pow(config.eps_decay, episode));
        const StartGoal sg =
            sample_start_goal(config.curriculum, config.grid, env_rng);
        const EpisodeResult ep =
            run_episode(config, params, sg.goal, sg.start, epsilon,
                        explore_rng);

        if (config.update_rule == UpdateRule::TD) {
            for (const Transition& t : ep.transitions) {
                transition_replay.push(t);
            }
        } else {
            const std::vector<double> returns =
                mc_returns(ep.transitions, config.gamma);
            for (std::size_t i = 0; i < ep.transitions.size(); ++i) {
                target_replay.push({ep.transitions[i].s, ep.transitions[i].g,
                                    returns[i]});
            }
        }

        const int updates =
            config.updates_per_episode_phase == UpdatePhase::PerStep
                ? static_cast<int>(ep.transitions.size())
                : 1;
        double loss_sum = 0.0;
        for (int u = 0; u < updates; ++u) {
            try {
                if (config.update_rule == UpdateRule::TD) {
                    const std::vector<Transition> batch =
                        transition_replay.sample(config.batch_size,
                                                 replay_rng);
                    const std::vector<double> targets =
                        td_targets(params, batch, config.gamma);
                    std::vector<TrainSample> samples(batch.size());
                    for (std::size_t i = 0; i < batch.size(); ++i) {
                        samples[i] = {batch[i].s, batch[i].g, targets[i]};
                    }
                    loss_sum += train_step(params, adam, samples);
                } else {
                    const std::vector<TrainSample> batch =
                        target_replay.sample(config.batch_size, replay_rng);
                    loss_sum += train_step(params, adam, batch);
                }
            } catch (const NumericFault& fault) {
                throw NumericFault("episode " + std::to_string(episode) +
                                   ": " + fault.what());
            }
        }

        result.log.success.push_back(ep.success ? 1 : 0);
        result.log.loss.push_back(updates > 0 ? loss_sum / updates : 0.0);
        result.log.epsilon.push_back(epsilon);
    }

    result.params = std::move(params);
    return result;
}

void write_train_log_csv(const TrainLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "episode,success,loss,epsilon\n";
    char buf[64];
    for (int i = 0; i < log.episodes(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.9g,%.9g", i,
                      static_cast<int>(log.success[i]), log.loss[i],
                      log.epsilon[i]);
        out << buf << '\n';
    }
}

TrainLog read_train_log_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != "episode,success,loss,epsilon") {
        throw std::runtime_error("bad train log header in " + path);
    }
    TrainLog log;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        int episode = 0, success = 0;
        double loss = 0.0, epsilon = 0.0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &episode, &success,
                        &loss, &epsilon) != 4) {
            throw std::runtime_error("bad train log row: " + line);
        }
        log.success.push_back(static_cast<std::uint8_t>(success));
        log.loss.push_back(loss);
        log.epsilon.push_back(epsilon);
    }
    return log;
}

}  // namespace gridrl
