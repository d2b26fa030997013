#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace tessera {

/// Deterministic random source. The generator and the normal transform are
/// fixed for the whole repository so that a seed fully determines every
/// sampled trajectory:
///
///   * state:    xoshiro256++ (Blackman/Vigna), seeded by four successive
///               outputs of splitmix64(seed)
///   * uniform:  top 53 bits of next_u64(), scaled to [0, 1)
///   * normal:   Marsaglia polar method; draws uniform pairs in (-1,1)^2,
///               rejects outside the unit disc, caches the second variate
///
/// Identical seeds produce identical streams bit for bit. The polar method
/// calls std::sqrt (exactly rounded per IEEE 754) and std::log; streams are
/// reproducible across platforms whose libm rounds log identically (glibc
/// does).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal variate.
    double normal();

    /// Fills dst[0..n) with consecutive normal variates. Equivalent to
    /// calling normal() n times (the cached spare carries across calls).
    void fill_normal(double* dst, std::size_t n);

    /// Uniform integer in [1, bound]; bound must be >= 1.
    int uniform_step(int bound);

private:
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace tessera
