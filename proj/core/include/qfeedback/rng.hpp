#pragma once

#include <cstdint>

namespace qfeedback {

/// Counter-based random stream (splitmix64 over seed + counter).
///
/// Every draw is a pure function of (seed, counter), so equal seeds give
/// bit-identical sequences on every platform. Uniform and Gaussian variates
/// are derived here rather than through <random> distributions, whose
/// output is implementation-defined.
///
/// Single owner; copy it to fork an identical sequence, or use derive()
/// for an independent sub-stream.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal variate (Box-Muller, one value per two uniforms).
    double normal();

    /// Independent stream keyed by (seed, key); does not advance this stream.
    RngStream derive(std::uint64_t key) const;

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qfeedback
