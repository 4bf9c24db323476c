#pragma once

#include <cmath>
#include <cstdint>

namespace scalinglab {

/// SplitMix64 step (Steele, Lea & Flood). Used both to expand seeds into
/// engine state and as the documented 64-bit mixing function that derives
/// independent per-task seeds from (master_seed, task_index).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-task seed: two SplitMix64 rounds over master_seed advanced by the task
/// index. Tasks get decorrelated streams regardless of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t task_index) {
    std::uint64_t s = master_seed + 0x9e3779b97f4a7c15ULL * (task_index + 1);
    splitmix64_next(s);
    return splitmix64_next(s);
}

/// xoshiro256++ (Blackman & Vigna) with Box-Muller normals. Both algorithms
/// are fixed here so that a (seed, call sequence) pair reproduces bit-identical
/// streams on any build of this project.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
        have_spare_ = false;
    }

    std::uint64_t next_u64() {
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

    /// Uniform on [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0,1]; safe as a log() argument.
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the second variate of each pair is
    /// cached, so draws come in deterministic (cos, sin) order.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double angle = 6.283185307179586476925286766559 * uniform();
        spare_ = r * std::sin(angle);
        have_spare_ = true;
        return r * std::cos(angle);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_;
};

}
