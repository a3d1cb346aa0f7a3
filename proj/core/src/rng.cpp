#include "sefdm/rng.hpp"

#include <cmath>

namespace sefdm {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream) : pos_(4) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
    ctr_[0] = 0;
    ctr_[1] = 0;
    ctr_[2] = static_cast<std::uint32_t>(stream);
    ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
    out_[0] = out_[1] = out_[2] = out_[3] = 0;
}

void Philox::refill() {
    std::uint32_t c0 = ctr_[0], c1 = ctr_[1], c2 = ctr_[2], c3 = ctr_[3];
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c0, hi0, lo0);
        mulhilo(kMul1, c2, hi1, lo1);
        const std::uint32_t n0 = hi1 ^ c1 ^ k0;
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ c3 ^ k1;
        const std::uint32_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    out_[0] = c0; out_[1] = c1; out_[2] = c2; out_[3] = c3;
    if (++ctr_[0] == 0) ++ctr_[1];   // 64-bit block counter
    pos_ = 0;
}

std::uint32_t Philox::next_u32() {
    if (pos_ >= 4) refill();
    return out_[pos_++];
}

std::uint64_t Philox::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double Philox::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u1 in (0,1] keeps the log finite.
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
}

std::complex<double> Philox::next_cnoise(double variance) {
    // One Box-Muller pair per sample; real/imag each carry variance/2.
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-variance * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

std::uint32_t Philox::next_below(std::uint32_t bound) {
    // Lemire-style rejection keeps the draw unbiased.
    const std::uint32_t threshold = (0u - bound) % bound;
    for (;;) {
        const std::uint32_t r = next_u32();
        if (r >= threshold) return r % bound;
    }
}

}  // namespace sefdm
