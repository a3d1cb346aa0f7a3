#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace sefdm {

// Rate-1/2 regular (3,6) LDPC code, deterministically built from (n, seed).
// Columns are permuted at construction so the first k positions are the
// systematic information bits; checks_of/vars_of describe the permuted
// parity-check matrix used by both encoder and decoder.
struct LdpcCode {
    int n = 0, k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<int>> vars_of;    // per check: variable indices (row support)
    std::vector<std::vector<int>> checks_of;  // per variable: check indices (column support)
    // parity_rows[i] is a k-bit row over GF(2): parity bit i = <row i, info>.
    std::vector<std::vector<std::uint64_t>> parity_rows;
};

// Greedy seeded construction with 4-cycle avoidance attempted first and a
// bounded number of reseeded retries; throws std::runtime_error on failure.
// n must be even and >= 96.
LdpcCode build_code(int n, std::uint64_t seed);

std::vector<std::uint8_t> encode(const LdpcCode& code, std::span<const std::uint8_t> info);

struct DecodeResult {
    std::vector<std::uint8_t> info;
    bool converged = false;
    int iterations = 0;
};

// Flooding sum-product decoder. LLR convention: positive means bit 0 more
// likely. Early exit on a zero syndrome; non-convergence returns the best
// running estimate with converged = false.
DecodeResult decode(const LdpcCode& code, std::span<const double> llr, int max_iter = 50);

bool syndrome_ok(const LdpcCode& code, std::span<const std::uint8_t> codeword);

// alist text format (for cross-tool verification of the parity structure).
void write_alist(const LdpcCode& code, std::ostream& os);

}  // namespace sefdm
