#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "gridrl/oracles.hpp"
#include "gridrl/value_net.hpp"

using namespace gridrl;

TEST_CASE("init is deterministic per seed with zero biases") {
    const auto a = init_params(0);
    const auto b = init_params(0);
    CHECK(a.params == b.params);
    CHECK(a.adam.t == 0);
    for (double bias : a.params.b1) {
        CHECK(bias == 0.0);
    }
    for (double bias : a.params.b2) {
        CHECK(bias == 0.0);
    }
    CHECK(a.params.b3 == 0.0);

    const auto c = init_params(1);
    CHECK(a.params.w1 != c.params.w1);

    const double bound = std::sqrt(6.0 / kInputDim);
    for (double w : a.params.w1) {
        CHECK(std::abs(w) <= bound);
    }
}

TEST_CASE("zero and constant-head networks") {
    const NetParams zero = NetParams::zeros();
    CHECK(forward(zero, {3, 4}, {5, 6}) == 0.0);

    NetParams constant = NetParams::zeros();
    constant.b3 = 2.5;
    CHECK(forward(constant, {0, 0}, {7, 7}) == 2.5);
    CHECK(forward(constant, {3, 1}, {2, 2}) == 2.5);
}

TEST_CASE("forward matches the straight-line reference") {
    Rng rng(42);
    for (int k = 0; k < 20; ++k) {
        NetParams p = init_params(rng.next_u64()).params;
        for (double& b : p.b1) {
            b = rng.uniform(-0.3, 0.3);
        }
        const State s{static_cast<int>(rng.uniform_int(8)),
                      static_cast<int>(rng.uniform_int(8))};
        const State g{static_cast<int>(rng.uniform_int(8)),
                      static_cast<int>(rng.uniform_int(8))};
        const double got = forward(p, s, g);
        const double want = oracles::forward_reference(p, s, g);
        CHECK(std::abs(got - want) <= 1e-12);
    }
}

TEST_CASE("zero-residual batch leaves parameters untouched") {
    const auto init = init_params(3);
    NetParams p = init.params;
    AdamState adam = init.adam;
    std::vector<TrainSample> batch;
    for (int i = 0; i < 4; ++i) {
        const State s{i, i};
        const State g{7 - i, i};
        batch.push_back({s, g, forward(p, s, g)});
    }
    const double loss = train_step(p, adam, batch);
    CHECK(loss == 0.0);
    CHECK(p == init.params);
    CHECK(adam.t == 1);
}

TEST_CASE("train step keeps shapes and decreases a fixed-target loss") {
    auto [p, adam] = init_params(11);
    const std::vector<TrainSample> batch{{{2, 3}, {5, 5}, 0.7}};
    double loss = 0.0;
    for (int i = 0; i < 2000; ++i) {
        loss = train_step(p, adam, batch);
        if (loss < 1e-3) {
            break;
        }
    }
    CHECK(loss < 1e-3);
    CHECK(p.w1.size() == static_cast<std::size_t>(kHiddenDim * kInputDim));
    CHECK(p.w2.size() == static_cast<std::size_t>(kHiddenDim * kHiddenDim));
    CHECK(p.w3.size() == static_cast<std::size_t>(kHiddenDim));
}

TEST_CASE("identical inputs give bit-identical updates") {
    auto a = init_params(5);
    auto b = init_params(5);
    const std::vector<TrainSample> batch{{{1, 2}, {3, 4}, 0.25},
                                         {{6, 0}, {2, 7}, -0.5}};
    const double la = train_step(a.params, a.adam, batch);
    const double lb = train_step(b.params, b.adam, batch);
    CHECK(la == lb);
    CHECK(a.params == b.params);
}

TEST_CASE("non-finite targets fault without touching parameters") {
    auto [p, adam] = init_params(9);
    const NetParams before = p;
    const std::vector<TrainSample> batch{
        {{1, 1}, {2, 2}, std::numeric_limits<double>::quiet_NaN()}};
    CHECK_THROWS_AS(train_step(p, adam, batch), NumericFault);
    CHECK(p == before);
    CHECK(adam.t == 0);
}

TEST_CASE("analytic gradient agrees with central differences") {
    Rng rng(17);
    const GridSpec grid = GridSpec::open(8, 8, 16);
    const auto states = valid_states(grid);
    double worst = 0.0;
    for (int draw = 0; draw < 10; ++draw) {
        NetParams p = init_params(rng.next_u64()).params;
        for (double& b : p.b1) {
            b = rng.uniform(-0.5, 0.5);
        }
        for (double& b : p.b2) {
            b = rng.uniform(-0.5, 0.5);
        }
        std::vector<TrainSample> batch(6);
        for (TrainSample& s : batch) {
            s.s = states[rng.uniform_index(64)];
            s.g = states[rng.uniform_index(64)];
            s.target = rng.uniform(-1.0, 1.0);
        }
        const auto r = oracles::gradient_check(p, batch, 10, rng);
        CHECK(r.checked > 0);
        worst = std::max(worst, r.max_rel_error);
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("checkpoints round-trip bit-exactly") {
    auto [p, adam] = init_params(21);
    const std::vector<TrainSample> batch{{{4, 4}, {1, 6}, 0.3}};
    train_step(p, adam, batch);

    const std::string path =
        (std::filesystem::temp_directory_path() / "gridrl_ckpt_test.ckpt")
            .string();
    save_checkpoint(p, path);
    const NetParams restored = load_checkpoint(path);
    CHECK(restored == p);
    std::filesystem::remove(path);
}
