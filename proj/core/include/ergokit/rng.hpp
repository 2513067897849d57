#pragma once

#include <cstdint>
#include <random>

namespace ergokit {

// All randomness flows from a single user-provided 64-bit seed. Independent
// streams are derived by hashing (seed, stream) through SplitMix64, so any
// component can be re-run in isolation and parallel consumers never share a
// generator. Uniform doubles use the top 53 bits explicitly; we do not rely
// on std::uniform_real_distribution, whose output is not pinned by the
// standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Child generator for a named stream; identical (seed, stream) pairs
    // yield identical sequences on any platform with a conforming
    // std::mt19937_64.
    static Rng derive(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1): 53 random bits scaled by 2^-53.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n) by rejection; exact, no modulo bias.
    std::uint64_t below(std::uint64_t n);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

// SplitMix64 step, used to mix seeds and stream ids.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace ergokit
