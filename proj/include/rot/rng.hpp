#pragma once

#include <cmath>
#include <cstdint>

namespace rot {

// SplitMix64 output function (Steele, Lea & Flood). Keys block streams and
// seeds the main generator state.
inline std::uint64_t splitmix64_mix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    std::uint64_t state = h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2));
    return splitmix64_mix(state);
}

// xoshiro256++ (Blackman & Vigna). Hand-rolled so that streams are
// bit-stable across platforms and standard-library versions.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t key) {
        std::uint64_t sm = key;
        for (auto& w : state_) w = splitmix64_mix(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1).
    double next_unit() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_exp() { return -std::log(next_unit()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Counter-derived stream for replicate block `block` of a run keyed by
// (seed, salt). Identical output no matter how blocks are scheduled.
inline Xoshiro256pp make_block_stream(std::uint64_t seed, std::uint64_t salt,
                                      std::uint64_t block) {
    return Xoshiro256pp(hash_combine(hash_combine(seed, salt), block));
}

}  // namespace rot
