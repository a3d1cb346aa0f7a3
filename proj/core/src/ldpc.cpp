#include "sefdm/ldpc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "sefdm/rng.hpp"

namespace sefdm {

namespace {

constexpr int kVarDegree = 3;
constexpr int kCheckDegree = 6;
constexpr int kMaxBuildRetries = 32;

// Message magnitude guards for the check-node update.
constexpr double kMsgMin = 1e-9;
constexpr double kMsgMax = 30.0;

struct Bitset {
    std::vector<std::uint64_t> w;
    explicit Bitset(int bits) : w(static_cast<std::size_t>((bits + 63) / 64)) {}
    void set(int i) { w[static_cast<std::size_t>(i >> 6)] |= 1ull << (i & 63); }
    bool get(int i) const { return (w[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1ull; }
    void flip(int i) { w[static_cast<std::size_t>(i >> 6)] ^= 1ull << (i & 63); }
    void operator^=(const Bitset& o) {
        for (std::size_t j = 0; j < w.size(); ++j) w[j] ^= o.w[j];
    }
};

// One construction attempt; empty result means the greedy edge placement
// wedged and the caller should reseed.
bool try_build_graph(int n, Philox& rng, std::vector<std::vector<int>>& vars_of,
                     std::vector<std::vector<int>>& checks_of) {
    const int m = n / 2;
    vars_of.assign(static_cast<std::size_t>(m), {});
    checks_of.assign(static_cast<std::size_t>(n), {});
    std::vector<int> check_deg(static_cast<std::size_t>(m), 0);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[rng.next_below(static_cast<std::uint32_t>(i + 1))]);

    std::vector<int> pick;
    for (int v : order) {
        for (int e = 0; e < kVarDegree; ++e) {
            // Candidate checks: below-degree and not already attached to v.
            // Prefer those that close no 4-cycle (no variable sharing two
            // checks with v), then lowest degree, seeded tie-break.
            int best_score = -1;
            pick.clear();
            for (int c = 0; c < m; ++c) {
                if (check_deg[static_cast<std::size_t>(c)] >= kCheckDegree) continue;
                bool attached = false;
                for (int c2 : checks_of[static_cast<std::size_t>(v)])
                    if (c2 == c) attached = true;
                if (attached) continue;

                bool cycle4 = false;
                for (int w : vars_of[static_cast<std::size_t>(c)]) {
                    for (int c2 : checks_of[static_cast<std::size_t>(w)]) {
                        for (int cv : checks_of[static_cast<std::size_t>(v)])
                            if (c2 == cv) { cycle4 = true; break; }
                        if (cycle4) break;
                    }
                    if (cycle4) break;
                }
                const int score = (cycle4 ? 0 : 1000) + (kCheckDegree - check_deg[static_cast<std::size_t>(c)]);
                if (score > best_score) {
                    best_score = score;
                    pick.clear();
                }
                if (score == best_score) pick.push_back(c);
            }
            if (pick.empty()) return false;
            const int c = pick[rng.next_below(static_cast<std::uint32_t>(pick.size()))];
            vars_of[static_cast<std::size_t>(c)].push_back(v);
            checks_of[static_cast<std::size_t>(v)].push_back(c);
            ++check_deg[static_cast<std::size_t>(c)];
        }
    }
    return true;
}

// Pivots the dense parity-check copy so that columns perm[k..n) form an
// invertible tail, then reduces the tail to the identity. Returns false if
// the matrix is rank deficient.
bool gauss_systematize(int n, int k, std::vector<Bitset>& rows, std::vector<int>& perm) {
    const int m = n - k;
    for (int r = 0; r < m; ++r) {
        const int pos = k + r;
        int pivot_row = -1;
        for (int rr = r; rr < m && pivot_row < 0; ++rr)
            if (rows[static_cast<std::size_t>(rr)].get(perm[static_cast<std::size_t>(pos)])) pivot_row = rr;
        if (pivot_row < 0) {
            // Swap in an information-region column that has a usable pivot.
            int swap_pos = -1;
            for (int j = 0; j < k && swap_pos < 0; ++j)
                for (int rr = r; rr < m; ++rr)
                    if (rows[static_cast<std::size_t>(rr)].get(perm[static_cast<std::size_t>(j)])) {
                        swap_pos = j;
                        pivot_row = rr;
                        break;
                    }
            if (swap_pos < 0) return false;
            std::swap(perm[static_cast<std::size_t>(pos)], perm[static_cast<std::size_t>(swap_pos)]);
        }
        std::swap(rows[static_cast<std::size_t>(r)], rows[static_cast<std::size_t>(pivot_row)]);
        for (int rr = 0; rr < m; ++rr)
            if (rr != r && rows[static_cast<std::size_t>(rr)].get(perm[static_cast<std::size_t>(pos)]))
                rows[static_cast<std::size_t>(rr)] ^= rows[static_cast<std::size_t>(r)];
    }
    return true;
}

}  // namespace

LdpcCode build_code(int n, std::uint64_t seed) {
    if (n < 96 || n % 2 != 0)
        throw std::invalid_argument("build_code: n must be even and >= 96");

    for (int attempt = 0; attempt < kMaxBuildRetries; ++attempt) {
        Philox rng(seed, 0x1d9c0000u + static_cast<std::uint64_t>(attempt));
        std::vector<std::vector<int>> vars_of, checks_of;
        if (!try_build_graph(n, rng, vars_of, checks_of)) continue;

        const int m = n / 2;
        const int k = n - m;

        std::vector<Bitset> rows(static_cast<std::size_t>(m), Bitset(n));
        for (int c = 0; c < m; ++c)
            for (int v : vars_of[static_cast<std::size_t>(c)]) rows[static_cast<std::size_t>(c)].set(v);

        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        if (!gauss_systematize(n, k, rows, perm)) continue;

        // Relabel variables so information positions come first in `perm`
        // order; the relabeled graph stays (3,6)-regular.
        std::vector<int> new_of_old(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) new_of_old[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = j;

        LdpcCode code;
        code.n = n;
        code.k = k;
        code.seed = seed;
        code.vars_of.assign(static_cast<std::size_t>(m), {});
        code.checks_of.assign(static_cast<std::size_t>(n), {});
        for (int c = 0; c < m; ++c) {
            for (int v : vars_of[static_cast<std::size_t>(c)]) {
                const int nv = new_of_old[static_cast<std::size_t>(v)];
                code.vars_of[static_cast<std::size_t>(c)].push_back(nv);
                code.checks_of[static_cast<std::size_t>(nv)].push_back(c);
            }
            std::sort(code.vars_of[static_cast<std::size_t>(c)].begin(),
                      code.vars_of[static_cast<std::size_t>(c)].end());
        }

        // After Gauss-Jordan the reduced rows read p_i = <left block, info>;
        // store the left block for encoding.
        code.parity_rows.assign(static_cast<std::size_t>(m),
                                std::vector<std::uint64_t>(static_cast<std::size_t>((k + 63) / 64)));
        for (int r = 0; r < m; ++r)
            for (int j = 0; j < k; ++j)
                if (rows[static_cast<std::size_t>(r)].get(perm[static_cast<std::size_t>(j)]))
                    code.parity_rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j >> 6)] |=
                        1ull << (j & 63);
        return code;
    }
    throw std::runtime_error("build_code: construction failed after bounded retries");
}

std::vector<std::uint8_t> encode(const LdpcCode& code, std::span<const std::uint8_t> info) {
    if (static_cast<int>(info.size()) != code.k)
        throw std::invalid_argument("encode: expected k information bits");

    const std::size_t words = static_cast<std::size_t>((code.k + 63) / 64);
    std::vector<std::uint64_t> u(words, 0);
    for (int j = 0; j < code.k; ++j)
        if (info[static_cast<std::size_t>(j)] & 1) u[static_cast<std::size_t>(j >> 6)] |= 1ull << (j & 63);

    std::vector<std::uint8_t> cw(static_cast<std::size_t>(code.n));
    std::copy(info.begin(), info.end(), cw.begin());
    for (int r = 0; r < code.n - code.k; ++r) {
        std::uint64_t acc = 0;
        const auto& row = code.parity_rows[static_cast<std::size_t>(r)];
        for (std::size_t w = 0; w < words; ++w) acc ^= row[w] & u[w];
        cw[static_cast<std::size_t>(code.k + r)] =
            static_cast<std::uint8_t>(std::popcount(acc) & 1);
    }
    return cw;
}

bool syndrome_ok(const LdpcCode& code, std::span<const std::uint8_t> codeword) {
    for (const auto& row : code.vars_of) {
        int parity = 0;
        for (int v : row) parity ^= codeword[static_cast<std::size_t>(v)] & 1;
        if (parity) return false;
    }
    return true;
}

DecodeResult decode(const LdpcCode& code, std::span<const double> llr, int max_iter) {
    if (static_cast<int>(llr.size()) != code.n)
        throw std::invalid_argument("decode: expected n channel LLRs");

    const int n = code.n;
    const int m = n - code.k;

    // Edge storage, check-major: edge e of check c targets vars_of[c][i].
    std::vector<int> edge_start(static_cast<std::size_t>(m + 1), 0);
    for (int c = 0; c < m; ++c)
        edge_start[static_cast<std::size_t>(c + 1)] =
            edge_start[static_cast<std::size_t>(c)] +
            static_cast<int>(code.vars_of[static_cast<std::size_t>(c)].size());
    const int n_edges = edge_start[static_cast<std::size_t>(m)];

    std::vector<double> msg_cv(static_cast<std::size_t>(n_edges), 0.0);
    std::vector<double> total(llr.begin(), llr.end());
    std::vector<std::uint8_t> hard(static_cast<std::size_t>(n));

    auto harden = [&] {
        for (int v = 0; v < n; ++v) hard[static_cast<std::size_t>(v)] = total[static_cast<std::size_t>(v)] < 0.0;
    };

    harden();
    if (syndrome_ok(code, hard))
        return {std::vector<std::uint8_t>(hard.begin(), hard.begin() + code.k), true, 0};

    std::vector<double> t(16), fwd(16), bwd(16);
    for (int iter = 1; iter <= max_iter; ++iter) {
        // Check pass: variable-to-check messages are total minus the previous
        // check-to-variable message on the same edge.
        for (int c = 0; c < m; ++c) {
            const auto& vs = code.vars_of[static_cast<std::size_t>(c)];
            const int deg = static_cast<int>(vs.size());
            const int e0 = edge_start[static_cast<std::size_t>(c)];
            for (int i = 0; i < deg; ++i) {
                double mv = total[static_cast<std::size_t>(vs[static_cast<std::size_t>(i)])] -
                            msg_cv[static_cast<std::size_t>(e0 + i)];
                const double mag = std::clamp(std::abs(mv), kMsgMin, kMsgMax);
                t[static_cast<std::size_t>(i)] = std::copysign(std::tanh(0.5 * mag), mv);
            }
            // Exclude-one products via forward/backward partials.
            fwd[0] = 1.0;
            for (int i = 0; i < deg; ++i) fwd[static_cast<std::size_t>(i + 1)] = fwd[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(i)];
            bwd[static_cast<std::size_t>(deg)] = 1.0;
            for (int i = deg - 1; i >= 0; --i) bwd[static_cast<std::size_t>(i)] = bwd[static_cast<std::size_t>(i + 1)] * t[static_cast<std::size_t>(i)];
            for (int i = 0; i < deg; ++i) {
                double p = fwd[static_cast<std::size_t>(i)] * bwd[static_cast<std::size_t>(i + 1)];
                p = std::clamp(p, -1.0 + 1e-15, 1.0 - 1e-15);
                msg_cv[static_cast<std::size_t>(e0 + i)] = 2.0 * std::atanh(p);
            }
        }

        // Variable pass: fresh totals from channel LLRs plus check messages.
        std::copy(llr.begin(), llr.end(), total.begin());
        for (int c = 0; c < m; ++c) {
            const auto& vs = code.vars_of[static_cast<std::size_t>(c)];
            const int e0 = edge_start[static_cast<std::size_t>(c)];
            for (std::size_t i = 0; i < vs.size(); ++i)
                total[static_cast<std::size_t>(vs[i])] += msg_cv[static_cast<std::size_t>(e0) + i];
        }

        harden();
        if (syndrome_ok(code, hard))
            return {std::vector<std::uint8_t>(hard.begin(), hard.begin() + code.k), true, iter};
    }
    return {std::vector<std::uint8_t>(hard.begin(), hard.begin() + code.k), false, max_iter};
}

void write_alist(const LdpcCode& code, std::ostream& os) {
    const int m = code.n - code.k;
    int max_col = 0, max_row = 0;
    for (const auto& col : code.checks_of) max_col = std::max(max_col, static_cast<int>(col.size()));
    for (const auto& row : code.vars_of) max_row = std::max(max_row, static_cast<int>(row.size()));

    os << code.n << " " << m << "\n" << max_col << " " << max_row << "\n";
    for (int v = 0; v < code.n; ++v)
        os << code.checks_of[static_cast<std::size_t>(v)].size() << (v + 1 < code.n ? " " : "\n");
    for (int c = 0; c < m; ++c)
        os << code.vars_of[static_cast<std::size_t>(c)].size() << (c + 1 < m ? " " : "\n");
    // alist indices are 1-based.
    for (int v = 0; v < code.n; ++v) {
        const auto& col = code.checks_of[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < col.size(); ++i) os << col[i] + 1 << (i + 1 < col.size() ? " " : "");
        os << "\n";
    }
    for (int c = 0; c < m; ++c) {
        const auto& row = code.vars_of[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < row.size(); ++i) os << row[i] + 1 << (i + 1 < row.size() ? " " : "");
        os << "\n";
    }
}

}  // namespace sefdm
