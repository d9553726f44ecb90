#ifndef CRIBMAC_RNG_HPP
#define CRIBMAC_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace cribmac {

// SplitMix64 step. Used both as the generator and as the seed mixer so that
// every stream is a pure function of (seed, tag, indices) and bit-identical
// across platforms. std::mt19937 + distributions are avoided on purpose:
// the standard leaves distribution output implementation-defined.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::uint64_t v, std::uint64_t h) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffULL;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stream-seed derivation: root seed + textual role tag + integer indices.
// Documented contract: every random object in the library draws from
// derive_seed(root, tag, {indices...}) so results are schedule-independent.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                 std::initializer_list<std::uint64_t> indices = {}) {
    std::uint64_t h = fnv1a64(tag);
    h = fnv1a64(root, h);
    for (std::uint64_t v : indices) h = fnv1a64(v, h);
    std::uint64_t s = h;
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Inverse-CDF draw from a pmf given as cumulative-friendly raw weights
    // summing to ~1. Ties broken toward the lower index.
    std::size_t sample(const std::vector<double>& pmf) {
        double u = next_double();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
            acc += pmf[i];
            if (u < acc) return i;
        }
        return pmf.empty() ? 0 : pmf.size() - 1;
    }

private:
    std::uint64_t state_;
};

}  // namespace cribmac

#endif  // CRIBMAC_RNG_HPP
