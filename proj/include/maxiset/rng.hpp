#pragma once

#include <array>
#include <cstdint>

namespace maxiset {

// Philox 4x32-10 block cipher (Salmon et al., SC 2011).  Counter-based: every
// output is a pure function of (counter, key), so draws can be generated in
// any order, on any number of threads, with bit-for-bit reproducibility.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Deterministic standard-normal stream addressed by (seed; rep, slot, pos).
//
// The addressing convention used throughout the library:
//   slot 0            -> the scaling coefficient alpha00
//   slot j + 1        -> resolution level j
//   pos  k            -> position within the level
// One Philox block yields one Box-Muller pair; the first variate is returned.
class counter_rng {
public:
    explicit counter_rng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    // Standard normal draw, independent across distinct (rep, slot, pos).
    double normal(std::uint64_t rep, std::uint32_t slot, std::uint32_t pos) const;

private:
    std::uint64_t seed_;
};

} // namespace maxiset
