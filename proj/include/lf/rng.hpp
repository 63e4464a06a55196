#ifndef LF_RNG_HPP
#define LF_RNG_HPP

#include <cstdint>

namespace lf {

// SplitMix64 (Steele, Lea, Flood 2014). The stream is addressable: element k
// of the stream for a given seed is mix(seed + (k+1)*GAMMA), so sample points
// can be generated out of order with identical results.
namespace splitmix64 {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// k-th element (k >= 0) of the stream with the given seed.
inline std::uint64_t at(std::uint64_t seed, std::uint64_t k) {
    return mix(seed + (k + 1) * kGamma);
}

// Uniform double in [0, 1) from a stream element.
inline double to_unit(std::uint64_t z) {
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t k, double lo, double hi) {
    return lo + (hi - lo) * to_unit(at(seed, k));
}

}  // namespace splitmix64

inline constexpr std::uint64_t kDefaultSeed = 424242;

}  // namespace lf

#endif
