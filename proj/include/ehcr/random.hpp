#ifndef EHCR_RANDOM_HPP
#define EHCR_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace ehcr {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// A seeded 64-bit random stream. Streams for different (seed, index) pairs
/// are decorrelated through splitmix64 before seeding the engine.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed, std::uint64_t index = 0)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ull))) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    result_type operator()() { return engine_(); }

    /// Uniform on (0, 1]; never returns 0 so logarithms stay finite.
    double uniform_open0() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform_open0()); }

    /// Standard normal via the Marsaglia polar method (no cached second variate).
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return u * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace ehcr

#endif  // EHCR_RANDOM_HPP
