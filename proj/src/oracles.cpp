#include "gridrl/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace gridrl {
namespace oracles {

double forward_reference(const NetParams& p, const State& s, const State& g) {
    const double x[4] = {static_cast<double>(s.x), static_cast<double>(s.y),
                         static_cast<double>(g.x), static_cast<double>(g.y)};
    double h1[kHiddenDim];
    for (int i = 0; i < kHiddenDim; ++i) {
        double z = p.b1[i];
        for (int j = 0; j < kInputDim; ++j) {
            z += p.w1[i * kInputDim + j] * x[j];
        }
        h1[i] = std::max(0.0, z);
    }
    double h2[kHiddenDim];
    for (int i = 0; i < kHiddenDim; ++i) {
        double z = p.b2[i];
        for (int j = 0; j < kHiddenDim; ++j) {
            z += p.w2[i * kHiddenDim + j] * h1[j];
        }
        h2[i] = std::max(0.0, z);
    }
    double y = p.b3;
    for (int i = 0; i < kHiddenDim; ++i) {
        y += p.w3[i] * h2[i];
    }
    return y;
}

GraphDecomposition decompose_reference(std::span<const std::int32_t> next,
                                       std::int32_t goal_index) {
    const int n = static_cast<int>(next.size());
    GraphDecomposition d;
    d.basin_of.assign(n, -1);
    d.transient.assign(n, -1);

    // cycle_id[c] for states on some already-registered cycle.
    std::vector<std::int32_t> cycle_id(n, -1);

    for (std::int32_t s = 0; s < n; ++s) {
        // Land on the cycle by iterating n times.
        std::int32_t x = s;
        for (int t = 0; t < n; ++t) {
            x = next[x];
        }
        if (cycle_id[x] < 0) {
            // Walk the cycle out and register it.
            std::vector<std::int32_t> cycle;
            std::int32_t c = x;
            do {
                cycle.push_back(c);
                c = next[c];
            } while (c != x);
            const auto smallest = std::min_element(cycle.begin(), cycle.end());
            std::rotate(cycle.begin(), smallest, cycle.end());
            const auto id = static_cast<std::int32_t>(d.attractors.size());
            for (std::int32_t m : cycle) {
                cycle_id[m] = id;
            }
            AttractorKind kind = AttractorKind::Cycle;
            if (cycle.size() == 1) {
                kind = cycle[0] == goal_index
                           ? AttractorKind::Goal
                           : AttractorKind::SpuriousFixedPoint;
            }
            d.attractors.push_back({std::move(cycle), kind});
        }
        d.basin_of[s] = cycle_id[x];

        // Transient: steps until the orbit first touches its cycle.
        // Cycles are absorbing, so the first registered cycle the orbit
        // lands on is necessarily its own.
        std::int32_t t = 0;
        std::int32_t w = s;
        while (cycle_id[w] != d.basin_of[s]) {
            w = next[w];
            ++t;
        }
        d.transient[s] = t;
    }
    return d;
}

std::vector<std::int32_t> random_functional_map(int n, Rng& rng) {
    std::vector<std::int32_t> next(n);
    for (int i = 0; i < n; ++i) {
        next[i] = rng.uniform_index(n);
    }
    return next;
}

SuccessorMap random_grid_map(const GridSpec& grid, const StateIndex& index,
                             const State& goal, Rng& rng) {
    SuccessorMap m;
    m.goal = goal;
    m.goal_index = index.index_of(goal);
    m.next.resize(index.size());
    for (int i = 0; i < index.size(); ++i) {
        if (i == m.goal_index) {
            m.next[i] = i;
            continue;
        }
        const std::vector<State> nbrs = neighbors(grid, index.state(i));
        const int pick = rng.uniform_index(static_cast<int>(nbrs.size()) + 1);
        m.next[i] = pick == static_cast<int>(nbrs.size())
                        ? i
                        : index.index_of(nbrs[pick]);
    }
    return m;
}

namespace {

// MSE via the reference forward, recording the rectifier sign pattern
// so kink crossings can be detected.
double reference_loss(const NetParams& p, std::span<const TrainSample> batch,
                      std::vector<std::uint8_t>& signs) {
    signs.clear();
    double loss = 0.0;
    for (const TrainSample& sample : batch) {
        const double x[4] = {static_cast<double>(sample.s.x),
                             static_cast<double>(sample.s.y),
                             static_cast<double>(sample.g.x),
                             static_cast<double>(sample.g.y)};
        double h1[kHiddenDim];
        for (int i = 0; i < kHiddenDim; ++i) {
            double z = p.b1[i];
            for (int j = 0; j < kInputDim; ++j) {
                z += p.w1[i * kInputDim + j] * x[j];
            }
            signs.push_back(z > 0.0);
            h1[i] = std::max(0.0, z);
        }
        double h2[kHiddenDim];
        for (int i = 0; i < kHiddenDim; ++i) {
            double z = p.b2[i];
            for (int j = 0; j < kHiddenDim; ++j) {
                z += p.w2[i * kHiddenDim + j] * h1[j];
            }
            signs.push_back(z > 0.0);
            h2[i] = std::max(0.0, z);
        }
        double y = p.b3;
        for (int i = 0; i < kHiddenDim; ++i) {
            y += p.w3[i] * h2[i];
        }
        const double r = y - sample.target;
        loss += r * r;
    }
    return loss / batch.size();
}

struct TensorRef {
    double* data;
    std::size_t size;
    const double* grad;
};

}  // namespace

GradientCheckResult gradient_check(const NetParams& p,
                                   std::span<const TrainSample> batch,
                                   int coords_per_tensor, Rng& rng,
                                   double step) {
    NetParams grads;
    loss_gradients(p, batch, grads);

    NetParams work = p;
    const TensorRef tensors[] = {
        {work.w1.data(), work.w1.size(), grads.w1.data()},
        {work.b1.data(), work.b1.size(), grads.b1.data()},
        {work.w2.data(), work.w2.size(), grads.w2.data()},
        {work.b2.data(), work.b2.size(), grads.b2.data()},
        {work.w3.data(), work.w3.size(), grads.w3.data()},
        {&work.b3, 1, &grads.b3},
    };

    GradientCheckResult result;
    std::vector<std::uint8_t> signs_plus, signs_minus;
    for (const TensorRef& tensor : tensors) {
        for (int c = 0; c < coords_per_tensor; ++c) {
            const std::size_t i =
                rng.uniform_int(static_cast<std::uint64_t>(tensor.size));
            const double saved = tensor.data[i];

            tensor.data[i] = saved + step;
            const double loss_plus = reference_loss(work, batch, signs_plus);
            tensor.data[i] = saved - step;
            const double loss_minus = reference_loss(work, batch, signs_minus);
            tensor.data[i] = saved;

            if (signs_plus != signs_minus) {
                ++result.skipped_near_kink;
                continue;
            }
            const double numeric = (loss_plus - loss_minus) / (2.0 * step);
            const double analytic = tensor.grad[i];
            const double denom =
                std::max(1e-8, std::abs(analytic) + std::abs(numeric));
            result.max_rel_error = std::max(
                result.max_rel_error, std::abs(analytic - numeric) / denom);
            ++result.checked;
        }
    }
    return result;
}

double pair_count_auc(const std::vector<double>& lgs,
                      const std::vector<bool>& failing) {
    double score = 0.0;
    long pairs = 0;
    for (std::size_t i = 0; i < lgs.size(); ++i) {
        if (!failing[i]) {
            continue;
        }
        for (std::size_t j = 0; j < lgs.size(); ++j) {
            if (failing[j]) {
                continue;
            }
            ++pairs;
            if (lgs[i] < lgs[j]) {
                score += 1.0;
            } else if (lgs[i] == lgs[j]) {
                score += 0.5;
            }
        }
    }
    return score / pairs;
}

}  // namespace oracles
}  // namespace gridrl
