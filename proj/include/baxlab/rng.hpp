#pragma once

#include <cmath>
#include <cstdint>

namespace baxlab {

// splitmix64, used for seeding and for deriving substreams.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with a bit buffer for cheap fair coins and geometric draws.
// Every sampler in the library takes an explicit Rng&, and substreams are
// derived from (seed, stream id), so any sample is reproducible from those
// two numbers alone.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
    }

    // Independent stream derived from (seed, id).
    static Rng substream(uint64_t seed, uint64_t id) {
        uint64_t sm = seed;
        uint64_t a = splitmix64(sm);
        sm = a ^ (id * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
        return Rng(splitmix64(sm));
    }

    uint64_t next() {
        uint64_t* s = state_;
        uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // Fair coin from the bit buffer.
    int coin() {
        if (nbits_ == 0) refill();
        int b = int(bits_ & 1);
        bits_ >>= 1;
        --nbits_;
        return b;
    }

    // Geometric(1/2) on {0,1,2,...}: P(k) = 2^{-k-1}. Counts the run of 1
    // bits before the first 0 bit, consuming bits exactly.
    int geometric_half() {
        int k = 0;
        for (;;) {
            if (nbits_ == 0) refill();
            uint64_t mask = nbits_ < 64 ? ((~bits_) & ((1ULL << nbits_) - 1)) : ~bits_;
            if (mask == 0) {
                k += nbits_;
                nbits_ = 0;
                continue;
            }
            int t = __builtin_ctzll(mask);
            k += t;
            bits_ >>= (t + 1);
            nbits_ -= (t + 1);
            return k;
        }
    }

    // Uniform in [0,1).
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1], safe as a log argument.
    double uniform01_open() { return double((next() >> 11) + 1) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        // rejection to kill modulo bias
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do { x = next(); } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller (second value cached).
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u = uniform01_open();
        double v = uniform01();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    void refill() {
        bits_ = next();
        nbits_ = 64;
    }

    uint64_t state_[4];
    uint64_t bits_ = 0;
    int nbits_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace baxlab
