#pragma once

#include <cstdint>
#include <random>

namespace slkl {

/// Seeded pseudorandom source with platform-independent output.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard.
/// The standard distributions are implementation-defined, so bounded integers,
/// uniforms and normals are derived here by hand. Independent substreams are
/// obtained by hashing (seed, stream tag) through SplitMix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream)
    {
        return Rng(mix(seed) ^ mix(stream + 0x632BE59BD9B4E019ULL));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
    std::uint64_t index(std::uint64_t bound);

    /// Standard normal (Marsaglia polar method).
    double normal();

    static std::uint64_t mix(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream tags used across the library.
namespace streams {
inline constexpr std::uint64_t sinc_train = 1;
inline constexpr std::uint64_t sinc_test = 2;
inline constexpr std::uint64_t sinc_noise = 3;
inline constexpr std::uint64_t candidates = 10;
inline constexpr std::uint64_t coordinates = 11;
inline constexpr std::uint64_t split = 20;
} // namespace streams

} // namespace slkl
