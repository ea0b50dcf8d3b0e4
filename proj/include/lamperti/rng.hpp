#ifndef LAMPERTI_RNG_HPP
#define LAMPERTI_RNG_HPP

#include <cstdint>
#include <random>

namespace lamperti {

using Rng = std::mt19937_64;

// splitmix64 step; used to derive independent stream seeds from a root seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic stream: seed = mix(root, tag, index). Streams derived for
// distinct (tag, index) are independent for all practical purposes and do
// not depend on scheduling, so replica results are thread-count invariant.
inline Rng make_stream(std::uint64_t root, std::uint64_t tag, std::uint64_t index = 0) {
    std::uint64_t s = root;
    std::uint64_t a = splitmix64(s);
    s ^= tag * 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64(s);
    s ^= index * 0xd1b54a32d192ed03ULL;
    std::uint64_t c = splitmix64(s);
    return Rng(a ^ (b << 1) ^ (c >> 1));
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double gaussian(Rng& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline double exponential(Rng& rng, double rate) {
    return std::exponential_distribution<double>(rate)(rng);
}

inline std::uint64_t poisson(Rng& rng, double mean) {
    return std::poisson_distribution<std::uint64_t>(mean)(rng);
}

// uniform integer in [0, n)
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

} // namespace lamperti

#endif
