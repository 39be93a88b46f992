#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>

namespace arviz {

/// Seeded pseudo-random stream with a cross-platform bit-exact definition.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so index
/// and Bernoulli draws are derived here from raw 64-bit outputs.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). Rejection sampling, so unbiased. n > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Uniform double in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// True with probability p. p >= 1 always true, p <= 0 always false.
    bool bernoulli(double p) { return uniform01() < p; }

    bool operator==(const Rng&) const = default;

    friend std::ostream& operator<<(std::ostream& os, const Rng& r);
    friend std::istream& operator>>(std::istream& is, Rng& r);

private:
    std::mt19937_64 engine_;
};

}  // namespace arviz
