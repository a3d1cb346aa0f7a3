#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sefdm/constellation.hpp"

namespace sefdm {

// Pattern design families. tra is the traditional fixed-K_A design; im1/im2/im3
// are the proposed designs whose pattern-2 activates one extra subcarrier while
// keeping the last subcarrier of every subblock unused; m1/m2 are the [4,1]
// designs with 8QAM/16QAM; ofdm_im is the traditional table at alpha = 1.
enum class Design { tra, im1, im2, im3, m1, m2, ofdm_im };

const char* design_name(Design d);

struct SlotMod {
    enum class Role { data, repeat, signalling };
    int slot = 0;        // subcarrier position within the subblock, 0-based
    Role role = Role::data;
    int m = 0;           // cardinality for data/signalling slots
    int repeat_of = -1;  // source slot for Role::repeat (always an earlier slot)
};

// One row of a scheme's lookup table.
struct PatternEntry {
    std::vector<std::uint8_t> index_bits;  // length L1
    std::vector<std::uint8_t> activation;  // length K, 1 = activated
    std::vector<SlotMod> slots;            // activated slots, ascending position
    double scale = 1.0;                    // sqrt(K / K_A) for this entry

    int ka() const { return static_cast<int>(slots.size()); }
};

struct SchemeParams {
    Design design = Design::tra;
    int k = 4;
    // K_A of pattern-1/3/4. For the proposed designs pattern-2 activates ka+1
    // subcarriers; for tra/m1/m2/ofdm_im every pattern activates exactly ka.
    int ka = 1;
    int m_a = 4;
    int m_b = 0, m_c = 0, m_d = 0;  // pattern-2 cardinalities (im3 only)
    double alpha = 1.0;
};

struct SchemeSpec {
    std::string name;  // e.g. "SEFDM-IM-2 [4,(1,2)] 16QAM a=0.675"
    SchemeParams params;
    int l1 = 0, l2 = 0;
    std::vector<PatternEntry> entries;      // U = 2^L1 rows
    std::map<int, Alphabet> alphabets;      // unit-scale alphabets by cardinality
    int m_eff = 0, ka_eff = 0;              // pattern-1 values, used for complexity

    int k() const { return params.k; }
    int l() const { return l1 + l2; }
    int u() const { return static_cast<int>(entries.size()); }
    double alpha() const { return params.alpha; }
    bool proposed() const {
        return params.design == Design::im1 || params.design == Design::im2 ||
               params.design == Design::im3;
    }
};

// Builds and validates a scheme from the K = 4 lookup tables. Throws
// std::invalid_argument naming the violated condition (cardinality products,
// index-bit bijection, unsupported combinations).
SchemeSpec make_scheme(const SchemeParams& p);

// Extension hook: accepts an explicit table for K != 4 provided every entry
// keeps the last subcarrier unused and all invariants hold.
SchemeSpec make_scheme(const SchemeParams& p, std::vector<PatternEntry> entries);

struct SubblockCodeword {
    std::vector<std::uint8_t> activation;  // length K
    std::vector<cplx> symbols;             // per activated slot, ascending
    std::vector<cplx> tx;                  // length K, non-zero exactly on activation
};

SubblockCodeword build_subblock(const SchemeSpec& s,
                                std::span<const std::uint8_t> index_bits,
                                std::span<const std::uint8_t> data_bits);

struct Candidate {
    std::vector<std::uint8_t> index_bits;
    std::vector<std::uint8_t> data_bits;
    std::vector<cplx> tx;
};

// Exhaustive hypothesis set: all U * 2^L2 (index, data) pairs, in a stable
// order (table row major, data bits counting up). The detector indexes into
// this list, so the order is part of the tie-break contract.
std::vector<Candidate> enumerate_candidates(const SchemeSpec& s);

// Inverse table lookup; throws if no entry matches.
std::vector<std::uint8_t> pattern_to_index_bits(const SchemeSpec& s,
                                                std::span<const std::uint8_t> activation);

}  // namespace sefdm
