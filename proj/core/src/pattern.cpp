#include "sefdm/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sefdm {

namespace {

int ilog2(int v) {
    int b = 0;
    while ((1 << b) < v) ++b;
    if ((1 << b) != v) throw std::invalid_argument("cardinality is not a power of two");
    return b;
}

std::vector<std::uint8_t> bits_of(int value, int width) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i)
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1);
    return out;
}

// K = 4 activation tables, one row per index-bit value 00, 01, 10, 11.
using Table = std::vector<std::vector<std::uint8_t>>;

Table table_for(Design d, int ka) {
    const bool trad = (d == Design::tra || d == Design::m1 || d == Design::m2 ||
                       d == Design::ofdm_im);
    if (trad && ka == 1)
        return {{1, 0, 0, 0}, {0, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}};
    if (trad && ka == 2)
        // The paper leaves the fixed-K_A=2 table unspecified; this is the
        // classical OFDM-IM lookup (cyclically adjacent pairs).
        return {{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}};
    if (trad && ka == 3)
        return {{0, 1, 1, 1}, {1, 1, 1, 0}, {1, 0, 1, 1}, {1, 1, 0, 1}};
    if (!trad && ka == 1)
        return {{1, 0, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
    if (!trad && ka == 2)
        return {{0, 1, 1, 0}, {1, 1, 1, 0}, {1, 0, 1, 0}, {1, 1, 0, 0}};
    throw std::invalid_argument("no K=4 lookup table for this design/K_A combination");
}

int popcount(const std::vector<std::uint8_t>& v) {
    int n = 0;
    for (auto b : v) n += b;
    return n;
}

std::string mod_name(int m) {
    switch (m) {
        case 2: return "BPSK";
        case 4: return "QPSK";
        case 8: return "8QAM";
        case 16: return "16QAM";
    }
    return std::to_string(m) + "-ary";
}

void validate(const SchemeSpec& s) {
    const int k = s.params.k;
    if (s.u() != (1 << s.l1))
        throw std::invalid_argument("scheme validation: U must equal 2^L1");

    std::set<std::vector<std::uint8_t>> index_seen;
    for (const auto& e : s.entries) {
        if (static_cast<int>(e.index_bits.size()) != s.l1 ||
            static_cast<int>(e.activation.size()) != k)
            throw std::invalid_argument("scheme validation: entry shape mismatch");
        if (popcount(e.activation) != e.ka() || e.ka() == 0)
            throw std::invalid_argument("scheme validation: activation/slot mismatch");
        index_seen.insert(e.index_bits);

        int data_bits = 0;
        int prev_slot = -1;
        for (const auto& sm : e.slots) {
            if (sm.slot <= prev_slot || !e.activation[static_cast<std::size_t>(sm.slot)])
                throw std::invalid_argument("scheme validation: slot order/activation mismatch");
            prev_slot = sm.slot;
            if (sm.role == SlotMod::Role::data) data_bits += ilog2(sm.m);
            if (sm.role == SlotMod::Role::repeat) {
                bool found_earlier = false;
                for (const auto& src : e.slots) {
                    if (src.slot == sm.repeat_of && src.slot < sm.slot &&
                        src.role == SlotMod::Role::data)
                        found_earlier = true;
                }
                if (!found_earlier)
                    throw std::invalid_argument(
                        "scheme validation: repeat slot must reference an earlier data slot");
            }
        }
        if (data_bits != s.l2)
            throw std::invalid_argument(
                "scheme validation: every pattern must carry L2 = " + std::to_string(s.l2) +
                " data bits, found " + std::to_string(data_bits));
        const double want = std::sqrt(static_cast<double>(k) / e.ka());
        if (std::abs(e.scale - want) > 1e-12)
            throw std::invalid_argument("scheme validation: entry scale must be sqrt(K/K_A)");
    }
    if (static_cast<int>(index_seen.size()) != s.u())
        throw std::invalid_argument("scheme validation: index bits are not a bijection");

    if (s.proposed()) {
        for (const auto& e : s.entries)
            if (e.activation.back())
                throw std::invalid_argument(
                    "scheme validation: proposed designs keep the last subcarrier unused");
    }

}

// Mixed-cardinality conditions for the im3 pattern-2, checked before any
// table or alphabet construction so violations surface with their own names.
void validate_cardinalities(const SchemeParams& p) {
    if (p.design != Design::im3) return;
    for (int m : {p.m_b, p.m_c}) {
        if (m != 2 && m != 4 && m != 8 && m != 16)
            throw std::invalid_argument(
                "scheme validation: pattern-2 cardinality " + std::to_string(m) +
                " is not a supported alphabet size");
    }
    if (p.ka == 1) {
        if (p.m_b * p.m_c != p.m_a)
            throw std::invalid_argument(
                "scheme validation: pattern-2 cardinalities must satisfy M_B*M_C = M_A (got " +
                std::to_string(p.m_b) + "*" + std::to_string(p.m_c) +
                " != " + std::to_string(p.m_a) + ")");
        if (p.m_b == p.m_a && p.m_c == p.m_a)
            throw std::invalid_argument(
                "scheme validation: at least one of M_B, M_C must differ from M_A");
    } else {
        if (p.m_d != 2 && p.m_d != 4 && p.m_d != 8 && p.m_d != 16)
            throw std::invalid_argument("scheme validation: pattern-2 cardinality " +
                                        std::to_string(p.m_d) +
                                        " is not a supported alphabet size");
        if (p.m_b * p.m_c * p.m_d != p.m_a * p.m_a)
            throw std::invalid_argument(
                "scheme validation: pattern-2 cardinalities must satisfy M_B*M_C*M_D = M_A^2 "
                "(got " + std::to_string(p.m_b) + "*" + std::to_string(p.m_c) + "*" +
                std::to_string(p.m_d) + " != " + std::to_string(p.m_a * p.m_a) + ")");
        if (p.m_b == p.m_a && p.m_c == p.m_a && p.m_d == p.m_a)
            throw std::invalid_argument(
                "scheme validation: at least one of M_B, M_C, M_D must differ from M_A");
    }
}

}  // namespace

const char* design_name(Design d) {
    switch (d) {
        case Design::tra: return "SEFDM-IM-Tra";
        case Design::im1: return "SEFDM-IM-1";
        case Design::im2: return "SEFDM-IM-2";
        case Design::im3: return "SEFDM-IM-3";
        case Design::m1: return "SEFDM-IM-M1";
        case Design::m2: return "SEFDM-IM-M2";
        case Design::ofdm_im: return "OFDM-IM";
    }
    return "?";
}

SchemeSpec make_scheme(const SchemeParams& p, std::vector<PatternEntry> entries) {
    validate_cardinalities(p);
    SchemeSpec s;
    s.params = p;
    s.l1 = entries.empty() ? 0 : static_cast<int>(entries[0].index_bits.size());
    s.l2 = p.ka * ilog2(p.m_a);
    s.entries = std::move(entries);
    s.m_eff = p.m_a;
    s.ka_eff = p.ka;

    s.alphabets.emplace(p.m_a, build_alphabet(p.m_a));
    for (int m : {p.m_b, p.m_c, p.m_d})
        if (m > 0 && !s.alphabets.count(m)) s.alphabets.emplace(m, build_alphabet(m));

    std::ostringstream name;
    name << design_name(p.design) << " [" << p.k << ",";
    if (s.proposed())
        name << "(" << p.ka << "," << p.ka + 1 << ")";
    else
        name << p.ka;
    name << "] " << mod_name(p.m_a) << " a=" << p.alpha;
    s.name = name.str();

    validate(s);
    return s;
}

SchemeSpec make_scheme(const SchemeParams& p) {
    if (p.k != 4)
        throw std::invalid_argument(
            "make_scheme: only K = 4 tables are built in; pass an explicit table for other K");
    if (p.design == Design::ofdm_im && p.alpha != 1.0)
        throw std::invalid_argument("make_scheme: OFDM-IM requires alpha = 1");
    if (p.design == Design::m1 && p.m_a != 8)
        throw std::invalid_argument("make_scheme: SEFDM-IM-M1 is the [4,1] 8QAM design");
    if (p.design == Design::m2 && p.m_a != 16)
        throw std::invalid_argument("make_scheme: SEFDM-IM-M2 is the [4,1] 16QAM design");
    if ((p.design == Design::m1 || p.design == Design::m2) && p.ka != 1)
        throw std::invalid_argument("make_scheme: M1/M2 designs have K_A = 1");

    const Table table = table_for(p.design, p.ka);
    const int l1 = 2;

    std::vector<PatternEntry> entries;
    for (int u = 0; u < static_cast<int>(table.size()); ++u) {
        PatternEntry e;
        e.index_bits = bits_of(u, l1);
        e.activation = table[static_cast<std::size_t>(u)];
        const int ka = popcount(e.activation);
        e.scale = std::sqrt(static_cast<double>(p.k) / ka);

        std::vector<int> slots;
        for (int i = 0; i < p.k; ++i)
            if (e.activation[static_cast<std::size_t>(i)]) slots.push_back(i);

        const bool proposed = (p.design == Design::im1 || p.design == Design::im2 ||
                               p.design == Design::im3);
        const bool pattern2 = proposed && u == 1;
        if (!pattern2) {
            for (int sl : slots) e.slots.push_back({sl, SlotMod::Role::data, p.m_a, -1});
        } else if (p.design == Design::im1) {
            // Extra subcarrier carries the receiver-known signalling symbol.
            e.slots.push_back({slots[0], SlotMod::Role::signalling, p.m_a, -1});
            for (std::size_t i = 1; i < slots.size(); ++i)
                e.slots.push_back({slots[i], SlotMod::Role::data, p.m_a, -1});
        } else if (p.design == Design::im2) {
            // Extra subcarrier repeats the first data symbol.
            e.slots.push_back({slots[0], SlotMod::Role::data, p.m_a, -1});
            e.slots.push_back({slots[1], SlotMod::Role::repeat, p.m_a, slots[0]});
            for (std::size_t i = 2; i < slots.size(); ++i)
                e.slots.push_back({slots[i], SlotMod::Role::data, p.m_a, -1});
        } else {  // im3: mixed cardinalities across the activated slots
            const int cards[3] = {p.m_b, p.m_c, p.m_d};
            for (std::size_t i = 0; i < slots.size(); ++i)
                e.slots.push_back({slots[i], SlotMod::Role::data, cards[i], -1});
        }
        entries.push_back(std::move(e));
    }
    return make_scheme(p, std::move(entries));
}

SubblockCodeword build_subblock(const SchemeSpec& s,
                                std::span<const std::uint8_t> index_bits,
                                std::span<const std::uint8_t> data_bits) {
    if (static_cast<int>(index_bits.size()) != s.l1)
        throw std::invalid_argument("build_subblock: expected L1 index bits");
    if (static_cast<int>(data_bits.size()) != s.l2)
        throw std::invalid_argument("build_subblock: expected L2 data bits");

    const PatternEntry* entry = nullptr;
    for (const auto& e : s.entries)
        if (std::equal(e.index_bits.begin(), e.index_bits.end(), index_bits.begin())) {
            entry = &e;
            break;
        }
    if (!entry) throw std::invalid_argument("build_subblock: index bits match no pattern");

    SubblockCodeword cw;
    cw.activation = entry->activation;
    cw.tx.assign(static_cast<std::size_t>(s.k()), cplx{});
    cw.symbols.reserve(entry->slots.size());

    std::size_t pos = 0;
    for (const auto& sm : entry->slots) {
        cplx sym;
        switch (sm.role) {
            case SlotMod::Role::data: {
                const auto& alph = s.alphabets.at(sm.m);
                const int w = alph.bits_per_symbol();
                sym = map_bits(alph, data_bits.subspan(pos, static_cast<std::size_t>(w))) *
                      entry->scale;
                pos += static_cast<std::size_t>(w);
                break;
            }
            case SlotMod::Role::repeat: {
                // Copy the value already placed on the source slot.
                sym = cw.tx[static_cast<std::size_t>(sm.repeat_of)];
                break;
            }
            case SlotMod::Role::signalling: {
                sym = s.alphabets.at(sm.m).signalling_point() * entry->scale;
                break;
            }
        }
        cw.symbols.push_back(sym);
        cw.tx[static_cast<std::size_t>(sm.slot)] = sym;
    }
    return cw;
}

std::vector<Candidate> enumerate_candidates(const SchemeSpec& s) {
    std::vector<Candidate> out;
    out.reserve(static_cast<std::size_t>(s.u()) << s.l2);
    for (const auto& e : s.entries) {
        for (int v = 0; v < (1 << s.l2); ++v) {
            Candidate c;
            c.index_bits = e.index_bits;
            c.data_bits = bits_of(v, s.l2);
            c.tx = build_subblock(s, c.index_bits, c.data_bits).tx;
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<std::uint8_t> pattern_to_index_bits(const SchemeSpec& s,
                                                std::span<const std::uint8_t> activation) {
    for (const auto& e : s.entries)
        if (e.activation.size() == activation.size() &&
            std::equal(e.activation.begin(), e.activation.end(), activation.begin()))
            return e.index_bits;
    throw std::invalid_argument("pattern_to_index_bits: activation matches no table entry");
}

}  // namespace sefdm
