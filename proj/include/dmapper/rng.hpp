#pragma once

#include <cstdint>

namespace dmapper {

// SplitMix64: the 64-bit finalizer-based generator from Steele, Lea & Flood
// (JPDC 2014), also used as the seeding generator of the xoshiro family.
// Chosen because the whole algorithm fits in a dozen lines, is fully
// specified by its constants, and therefore produces the same stream on
// every platform and standard library.  std::mt19937 would also be portable,
// but std::uniform_real_distribution / std::normal_distribution are not
// (implementations differ), so we own the mapping to doubles too.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1): top 53 bits scaled by 2^-53.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n); n must be positive.  Modulo bias is below
    // 2^-32 for the n used here (shape sizes, axis picks), which is fine for
    // data generation.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // Standard normal via Box-Muller on our own uniforms.  The second value
    // of each pair is cached so consecutive calls consume one uniform pair.
    double gaussian();

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace dmapper
