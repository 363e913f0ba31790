#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace symban {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic random source: mt19937_64 plus explicit transforms.
// normal() uses a cache-free Box-Muller (two uniforms per draw) so the
// stream state is exactly the engine state; uniform_int() uses rejection
// sampling, so draws are unbiased and reproducible across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static const char* algorithm_name() { return "mt19937_64+boxmuller"; }

    // Independent stream derivation: two splitmix64 rounds mixing the
    // master seed with a stream salt. Streams for distinct salts are
    // uncorrelated for practical purposes and fully reproducible.
    static Rng derive(std::uint64_t master_seed, std::uint64_t salt) {
        return Rng(splitmix64(splitmix64(master_seed) ^ salt));
    }

    std::uint64_t u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform on {0, ..., n-1}, unbiased.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t bound = n * ((~std::uint64_t{0}) / n);
        for (;;) {
            const std::uint64_t x = u64();
            if (x < bound) return x % n;
        }
    }

    double normal() {
        // u1 in (0, 1] so the log is finite.
        const double u1 = static_cast<double>((u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace symban
