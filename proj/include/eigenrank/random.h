#pragma once

#include <cstdint>

namespace eigenrank {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so sampled fields do not depend on draw order or platform.
class CounterRng {
  public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : m_key(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix(m_key + mix(counter + 0x9e3779b97f4a7c15ULL));
    }

    // Uniform double in [0, 1) built from the top 53 bits.
    constexpr double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    constexpr double uniform(std::uint64_t counter, double lo,
                             double hi) const noexcept {
        return lo + (hi - lo) * uniform(counter);
    }

  private:
    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t m_key;
};

} // namespace eigenrank
