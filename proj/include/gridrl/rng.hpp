#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gridrl {

// FNV-1a, also used for manifest checksums.
constexpr std::uint64_t fnv1a(std::string_view bytes,
                              std::uint64_t h = 1469598103934665603ULL) {
    for (char c : bytes) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random stream. One master seed spawns independent named
// streams (init, env, explore, replay, ...) so adding draws to one
// consumer does not perturb the others. Uniform helpers are hand-rolled
// because the std distributions are not pinned by the standard.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng stream(std::uint64_t master_seed, std::string_view name) {
        return Rng(splitmix64(master_seed ^ fnv1a(name)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Unbiased uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    int uniform_index(int n) {
        return static_cast<int>(uniform_int(static_cast<std::uint64_t>(n)));
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace gridrl
