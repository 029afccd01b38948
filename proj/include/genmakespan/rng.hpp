#pragma once

#include <cstdint>

namespace gms {

// Deterministic splitmix64 generator. We do not use <random> distributions
// because their outputs are not pinned across standard library
// implementations, and reruns with the same seed must be byte-identical.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 bits of mantissa.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound). bound > 0. Lemire multiply-shift; bias is
    // below 2^-32 for the bounds used here and, more importantly, stable.
    std::uint64_t next_below(std::uint64_t bound) {
        return std::uint64_t((static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    int next_int(int bound) { return int(next_below(std::uint64_t(bound))); }

    // Uniform in [lo, hi).
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Derive an independent stream seed. Used for per-repetition,
    // per-chunk and per-guess sub-generators.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

} // namespace gms
