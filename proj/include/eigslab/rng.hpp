#pragma once

#include <cstdint>

namespace eigslab {

// splitmix64 output mix.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator built on splitmix64 streams. A logical stream is
// addressed by (seed, a, b); the ids are folded into the initial state by
// independent mixing rounds, so any worker reproduces any stream without
// shared state. Sequential draws then follow the splitmix64 recurrence.
class Rng {
  public:
    explicit Rng(uint64_t seed, uint64_t a = 0, uint64_t b = 0) {
        state_ = mix64(seed + 0x9e3779b97f4a7c15ULL);
        state_ = mix64(state_ ^ (a + 0xd1b54a32d192ed03ULL));
        state_ = mix64(state_ ^ (b + 0x8cb92ba72f3d8dd7ULL));
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, n), unbiased (rejection sampling).
    uint64_t next_below(uint64_t n) {
        const uint64_t limit = n * (UINT64_MAX / n);
        uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

  private:
    uint64_t state_;
};

// The documented default seed used by every CLI command unless overridden.
inline constexpr uint64_t kDefaultSeed = 271828;

}  // namespace eigslab
