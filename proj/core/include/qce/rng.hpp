// Counter-based pseudo-random stream. A draw is a pure function of
// (seed, index, stream): there is no generator state to advance, so runs can
// be partitioned across workers by index range and still reproduce the
// serial output bit-for-bit.

#pragma once

#include <cstdint>

namespace qce {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) : key_(mix64(seed)) {}

    constexpr std::uint64_t bits(std::uint64_t index, std::uint64_t stream = 0) const {
        std::uint64_t h = key_;
        h = mix64(h ^ (stream * 0xd1342543de82ef95ull));
        h = mix64(h ^ (index * 0xaf251af3b0f025b5ull));
        return h;
    }

    // Uniform double in [0, 1), 53 significant bits.
    constexpr double uniform(std::uint64_t index, std::uint64_t stream = 0) const {
        return static_cast<double>(bits(index, stream) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
};

} // namespace qce
