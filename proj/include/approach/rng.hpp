#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace approach {

// Counter-based deterministic randomness. Every variate is a pure function of
// (seed, stage, stream), so strategy sampling and adversary sampling draw from
// independent streams and runs can execute concurrently without shared state.

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

enum class Stream : std::uint64_t { kPlayer1 = 0, kPlayer2 = 1, kAux = 2 };

// Uniform draw in [0, 1).
inline double uniform_unit(std::uint64_t seed, std::uint64_t stage, Stream stream) {
    const std::uint64_t counter = stage * 4ULL + static_cast<std::uint64_t>(stream);
    std::uint64_t h = detail::splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = detail::splitmix64(h + counter);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Index sampled from nonnegative weights summing to ~1 (CDF walk).
inline std::size_t sample_index(const std::vector<double>& weights, double u) {
    if (weights.empty()) throw std::invalid_argument("sample_index: empty weights");
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
        cum += weights[k];
        if (u < cum) return k;
    }
    return weights.size() - 1;
}

// Small stateful generator for test data; not used by the simulation engine.
class SplitMix {
  public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next_u64() { return detail::splitmix64(state_++); }
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }
    std::size_t next_below(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  private:
    std::uint64_t state_;
};

}  // namespace approach
