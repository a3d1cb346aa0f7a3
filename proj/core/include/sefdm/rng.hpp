#pragma once

#include <complex>
#include <cstdint>

namespace sefdm {

// Counter-based generator (Philox4x32-10). Every (seed, stream) pair is an
// independent, reproducible sequence, so Monte Carlo trials can be assigned
// stream ids and executed on any number of workers without changing the
// numbers they produce. The generator name is recorded in CSV metadata.
class Philox {
public:
    static constexpr const char* kName = "philox4x32-10";

    Philox() : Philox(0, 0) {}
    Philox(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_double();

    // Standard normal via Box-Muller (pair cached).
    double next_gaussian();

    // Circularly symmetric complex Gaussian, E|w|^2 = variance.
    std::complex<double> next_cnoise(double variance);

    // Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint32_t next_below(std::uint32_t bound);

    std::uint8_t next_bit() { return static_cast<std::uint8_t>(next_u32() & 1u); }

private:
    void refill();

    std::uint32_t key_[2];
    std::uint32_t ctr_[4];   // [block_lo, block_hi, stream_lo, stream_hi]
    std::uint32_t out_[4];
    int pos_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sefdm
