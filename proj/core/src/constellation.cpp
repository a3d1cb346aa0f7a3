#include "sefdm/constellation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sefdm {

namespace {

// Gray order on a 4-level axis: 00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3.
double axis4(unsigned b_hi, unsigned b_lo) {
    const double sign = b_hi ? -1.0 : 1.0;
    const double mag = b_lo ? 1.0 : 3.0;
    return sign * mag;
}

double axis2(unsigned b) { return b ? -1.0 : 1.0; }

}  // namespace

int Alphabet::bits_per_symbol() const {
    int b = 0;
    while ((1 << b) < m) ++b;
    return b;
}

Alphabet build_alphabet(int m, double scale) {
    if (m != 2 && m != 4 && m != 8 && m != 16)
        throw std::invalid_argument("build_alphabet: unsupported cardinality M=" + std::to_string(m));
    if (!(scale > 0.0))
        throw std::invalid_argument("build_alphabet: scale must be positive");

    Alphabet a;
    a.m = m;
    a.scale = scale;
    a.points.resize(static_cast<std::size_t>(m));

    for (int v = 0; v < m; ++v) {
        const unsigned u = static_cast<unsigned>(v);
        cplx p;
        switch (m) {
            case 2:
                p = {axis2(u & 1u), 0.0};
                break;
            case 4:
                p = cplx{axis2((u >> 1) & 1u), axis2(u & 1u)} / std::sqrt(2.0);
                break;
            case 8:
                p = cplx{axis4((u >> 2) & 1u, (u >> 1) & 1u), axis2(u & 1u)} / std::sqrt(6.0);
                break;
            case 16:
                p = cplx{axis4((u >> 3) & 1u, (u >> 2) & 1u), axis4((u >> 1) & 1u, u & 1u)} /
                    std::sqrt(10.0);
                break;
        }
        a.points[static_cast<std::size_t>(v)] = p * scale;
    }
    return a;
}

cplx map_bits(const Alphabet& a, std::span<const std::uint8_t> bits) {
    if (static_cast<int>(bits.size()) != a.bits_per_symbol())
        throw std::invalid_argument("map_bits: expected " + std::to_string(a.bits_per_symbol()) +
                                    " bits, got " + std::to_string(bits.size()));
    unsigned v = 0;
    for (const auto b : bits) v = (v << 1) | (b & 1u);
    return a.points[v];
}

std::vector<std::uint8_t> unmap_point(const Alphabet& a, cplx point) {
    for (int v = 0; v < a.m; ++v) {
        if (std::abs(a.points[static_cast<std::size_t>(v)] - point) < 1e-9 * (1.0 + a.scale)) {
            const int nb = a.bits_per_symbol();
            std::vector<std::uint8_t> bits(static_cast<std::size_t>(nb));
            for (int i = 0; i < nb; ++i)
                bits[static_cast<std::size_t>(i)] =
                    static_cast<std::uint8_t>((v >> (nb - 1 - i)) & 1);
            return bits;
        }
    }
    throw std::invalid_argument("unmap_point: point is not an alphabet symbol");
}

int nearest_point(const Alphabet& a, cplx r) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int v = 0; v < a.m; ++v) {
        const double d = std::norm(r - a.points[static_cast<std::size_t>(v)]);
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    return best;
}

}  // namespace sefdm
