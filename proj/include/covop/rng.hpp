#pragma once

#include <cstdint>

namespace covop {

// Deterministic 64-bit generator (splitmix64). We deliberately avoid
// <random>'s distributions: their output sequences are implementation-defined,
// and the harness promises bit-identical results across platforms and across
// worker counts. Streams are derived by hashing (seed, tag, indices), so any
// (start state, trajectory) pair gets its own independent stream regardless of
// how work is scheduled.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
    std::uint32_t next_below(std::uint32_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t threshold = (~std::uint64_t{0} - bound + 1) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return static_cast<std::uint32_t>(r % bound);
        }
    }

  private:
    std::uint64_t state_;
};

// Combine a seed with stream indices into a new seed. A couple of splitmix
// scrambles per word is plenty to decorrelate neighbouring streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    Rng h(seed);
    std::uint64_t s = h.next_u64();
    s ^= a + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    Rng h2(s);
    s = h2.next_u64();
    s ^= b + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    Rng h3(s);
    s = h3.next_u64();
    s ^= c + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    return Rng(s).next_u64();
}

// Stream tags keep unrelated sampling decoupled even under one master seed.
namespace stream {
constexpr std::uint64_t cover_walk = 1;
constexpr std::uint64_t hitting_walk = 2;
constexpr std::uint64_t policy_cost = 3;
constexpr std::uint64_t graph_gen = 4;
constexpr std::uint64_t learn_run = 5;
constexpr std::uint64_t trajectory = 6;
constexpr std::uint64_t study = 7;
constexpr std::uint64_t initial_state = 8;
}  // namespace stream

}  // namespace covop
