#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace sefdm {

using cplx = std::complex<double>;

// M-ary symbol alphabet with per-axis Gray bit labels. points[v] is the
// symbol whose label is the log2(M)-bit binary expansion of v, MSB first.
// Before scaling the alphabet has unit average energy; `scale` multiplies
// every point, so the average energy is scale^2.
//
// Labeling convention (see `sefdmim patterns --alphabets` for the table):
//   BPSK   : bit 0 -> +1, 1 -> -1
//   QPSK   : bit i0 -> I, i1 -> Q, 0 -> +1, 1 -> -1, points (+-1 +-j)/sqrt(2)
//   8QAM   : rectangular, bits i0 i1 -> I in {+-1,+-3}, q0 -> Q in {+-1}
//   16QAM  : square, bits i0 i1 -> I, q0 q1 -> Q, each axis in {+-1,+-3}
// Two-bit axes use the Gray order 00->+3, 01->+1, 11->-1, 10->-3.
struct Alphabet {
    int m = 0;
    double scale = 1.0;
    std::vector<cplx> points;

    int bits_per_symbol() const;
    // The fixed signalling point: the symbol labeled all-zeros.
    cplx signalling_point() const { return points.front(); }
};

// Supported cardinalities: 2, 4, 8, 16. Throws std::invalid_argument otherwise.
Alphabet build_alphabet(int m, double scale = 1.0);

// bits.size() must equal bits_per_symbol().
cplx map_bits(const Alphabet& a, std::span<const std::uint8_t> bits);

// Exact inverse of map_bits (throws if `point` is not in the alphabet).
std::vector<std::uint8_t> unmap_point(const Alphabet& a, cplx point);

// Index of the minimum-distance alphabet point.
int nearest_point(const Alphabet& a, cplx r);

}  // namespace sefdm
