#pragma once

#include <cstdint>

namespace qss {

// Deterministic 64-bit stream (splitmix64). Streams are cheap values: the
// engines derive one per round and per purpose so results never depend on
// evaluation order. No libc/std distributions are used anywhere, which keeps
// transcripts byte-identical across platforms and thread counts.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform double in [0,1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), n >= 1
    int uniform_int(int n) {
        return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                                 static_cast<std::uint64_t>(n)) >> 64);
    }

    int coin() { return static_cast<int>(next_u64() >> 63); }

private:
    std::uint64_t state_;
};

// Stable substream derivation: (master, salt, index) -> seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt,
                                 std::uint64_t index = 0) {
    std::uint64_t z = master;
    z ^= 0x9e3779b97f4a7c15ull * (salt + 0x243f6a8885a308d3ull);
    z ^= 0xc2b2ae3d27d4eb4full * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace qss
