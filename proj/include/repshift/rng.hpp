#pragma once

#include <cstdint>

namespace repshift {

// splitmix64; expands a user seed into generator state and derives
// per-item sub-seeds (seed + index mixing must not be a plain xor).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed + 0x632be59bd9b4e019ULL * (index + 1);
    return splitmix64(s);
}

// xoshiro256** (Blackman & Vigna). Fixed algorithm so identical seeds give
// bit-identical streams on every platform.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0,1), 53 mantissa bits
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // uniform in [0,n), rejection sampled so the distribution is exact
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x, r;
        do {
            x = next();
            r = x % n;
        } while (x - r > (0ULL - n));
        return r;
    }

    // uniform integer in [lo,hi], inclusive
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

}  // namespace repshift
