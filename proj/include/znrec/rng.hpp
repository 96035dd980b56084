#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace znrec {

// Counter-based pseudorandom stream: output i is the SplitMix64 mix of
// seed + (i+1) * 0x9E3779B97F4A7C15. Range draws use rejection, so they are
// exactly uniform. Every draw adds log2(range) to the entropy tally, which is
// the analytic bit count of the randomness consumed.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        ++counter_;
        return mix(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    // uniform on [0, bound), bound >= 1
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("uniform_below: zero bound");
        entropy_bits_ += std::log2(static_cast<double>(bound));
        if (bound == 1) return 0;
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            std::uint64_t x = next_u64();
            if (x >= threshold) return (x - threshold) % bound;
        }
    }

    // uniform on [lo, hi] inclusive
    long long uniform_int(long long lo, long long hi) {
        if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo);
        if (span == UINT64_MAX) {
            entropy_bits_ += 64.0;
            return static_cast<long long>(next_u64());
        }
        return lo + static_cast<long long>(uniform_below(span + 1));
    }

    int sign_bit() { return uniform_below(2) == 0 ? 1 : -1; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }
    double entropy_bits() const { return entropy_bits_; }

    // Documented seed derivation for campaign cells:
    // mix(mix(base + GAMMA*(a+1)) + GAMMA*(b+1)).
    static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
        const std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;
        return mix(mix(base + gamma * (a + 1)) + gamma * (b + 1));
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double entropy_bits_ = 0.0;
};

}  // namespace znrec
