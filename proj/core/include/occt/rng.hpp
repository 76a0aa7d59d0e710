#pragma once

#include <cstdint>
#include <cmath>

namespace occt {

// Pseudo-random streams for the Monte Carlo oracles.
//
// Every replication gets its own stream derived from (seed, stream index)
// through a SplitMix64 scramble, so results are reproducible bit-for-bit
// regardless of how replications are distributed over threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { seed_state(seed); }

    // Independent substream: same (seed, index) always yields the same stream.
    Rng(std::uint64_t seed, std::uint64_t stream_index) {
        seed_state(seed ^ split_mix(0x9e3779b97f4a7c15ULL + stream_index));
    }

    std::uint64_t next_u64() {
        // xoshiro256** (Blackman/Vigna), public domain reference constants.
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on (0,1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Marsaglia polar method; one spare kept between calls.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    // Erlang(k, rate) as a sum of exponentials (k small in this artifact).
    double erlang(int k, double rate) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += exponential(rate);
        return s;
    }

    std::uint64_t bounded(std::uint64_t n) { return next_u64() % n; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t split_mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    void seed_state(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            s = split_mix(x);
        }
        has_spare_ = false;
        spare_ = 0.0;
    }

    std::uint64_t s_[4] = {};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace occt
