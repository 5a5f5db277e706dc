#pragma once

#include <cstdint>

namespace wcsck {

// xorshift64* generator with explicit output mapping. std::mt19937 would do,
// but the <random> distributions are implementation-defined, and run outputs
// must be byte-identical across toolchains for a fixed seed.
class rng64 {
  public:
    explicit rng64(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545f4914f6cdd1dull;
    }

    // Uniform in [0,1): 53 mantissa bits, exact dyadic rational.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  private:
    std::uint64_t state_;
};

}  // namespace wcsck
