#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridrl/env.hpp"

namespace gridrl {

// Thrown when a forward pass or gradient produces a non-finite value.
// Parameters are left unchanged when a train step faults.
class NumericFault : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kInputDim = 4;
inline constexpr int kHiddenDim = 128;

// Goal-conditioned value network 4 -> 128 -> 128 -> 1 with rectifier
// activations after the two hidden layers. Weights are row-major:
// w1[i*kInputDim + j] feeds hidden unit i from input j. All math is in
// 64-bit floats so reruns are bit-identical.
struct NetParams {
    std::vector<double> w1;  // kHiddenDim x kInputDim
    std::vector<double> b1;  // kHiddenDim
    std::vector<double> w2;  // kHiddenDim x kHiddenDim
    std::vector<double> b2;  // kHiddenDim
    std::vector<double> w3;  // kHiddenDim
    double b3 = 0.0;

    static NetParams zeros();
    bool all_finite() const;

    friend bool operator==(const NetParams&, const NetParams&) = default;
};

struct AdamState {
    NetParams m = NetParams::zeros();  // first moments
    NetParams v = NetParams::zeros();  // second moments
    std::int64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double learning_rate = 1e-3;
};

// Raw integer coordinates cast to reals; no normalization.
inline std::array<double, kInputDim> encode_input(const State& s,
                                                  const State& g) {
    return {static_cast<double>(s.x), static_cast<double>(s.y),
            static_cast<double>(g.x), static_cast<double>(g.y)};
}

struct InitResult {
    NetParams params;
    AdamState adam;
};

// Fan-in-scaled uniform weights in [-sqrt(6/fan_in), +sqrt(6/fan_in)],
// zero biases, zero Adam accumulators. Deterministic given the seed;
// tensors are filled in declaration order (w1, w2, w3).
InitResult init_params(std::uint64_t rng_seed);

double forward(const NetParams& p, const State& s, const State& g);

// Batched forward over encoded inputs (n x kInputDim, row-major).
void forward_batch(const NetParams& p, std::span<const double> inputs,
                   std::span<double> values_out);

struct TrainSample {
    State s;
    State g;
    double target = 0.0;
};

// Mean squared error over the batch and its analytic gradient, in the
// NetParams layout. This is the backward pass behind train_step.
double loss_gradients(const NetParams& p, std::span<const TrainSample> batch,
                      NetParams& grads);

// One Adam update on the mean-squared-error gradient over the batch.
// Returns the pre-update loss. Throws NumericFault (leaving params and
// adam untouched) if the loss or any gradient entry is non-finite.
double train_step(NetParams& p, AdamState& a,
                  std::span<const TrainSample> batch);

// Hexfloat text checkpoint with a shape header; round-trips bit-exactly.
void save_checkpoint(const NetParams& p, const std::string& path);
NetParams load_checkpoint(const std::string& path);

}  // namespace gridrl
