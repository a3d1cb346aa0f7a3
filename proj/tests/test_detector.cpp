#include <doctest.h>

#include <cmath>
#include <vector>

#include "sefdm/detector.hpp"
#include "sefdm/rng.hpp"

using namespace sefdm;

namespace {

SchemeParams params(Design d, int ka, int ma, double alpha, int mb = 0, int mc = 0, int md = 0) {
    SchemeParams p;
    p.design = d;
    p.ka = ka;
    p.m_a = ma;
    p.m_b = mb;
    p.m_c = mc;
    p.m_d = md;
    p.alpha = alpha;
    return p;
}

// Test-side re-implementation of the candidate metric, elementwise.
double psi_oracle(std::span<const cplx> rg, const CMat& cg, std::span<const cplx> sg, double n0) {
    double acc = 0;
    for (int r = 0; r < cg.rows; ++r) {
        cplx y{};
        for (int c = 0; c < cg.cols; ++c) y += cg(r, c) * sg[c];
        const cplx diff = rg[r] - y;
        acc += diff.real() * diff.real() + diff.imag() * diff.imag();
    }
    return acc / n0;
}

std::vector<cplx> filtered(const CMat& cg, std::span<const cplx> tx) { return mat_vec(cg, tx); }

std::vector<cplx> noisy(std::span<const cplx> clean, double n0, Philox& rng) {
    std::vector<cplx> out(clean.begin(), clean.end());
    for (auto& v : out) v += rng.next_cnoise(n0);
    return out;
}

}  // namespace

TEST_CASE("psi examples") {
    const auto s = make_scheme(params(Design::tra, 1, 4, 0.67));
    const auto cg = correlation_matrix(12, 0.67).subblock(0, 4);
    const auto cands = enumerate_candidates(s);

    const auto y = filtered(cg, cands[5].tx);
    CHECK(psi(y, cg, cands[5].tx, 0.3) == doctest::Approx(0.0).epsilon(1e-12));

    auto shifted = y;
    shifted[0] += cplx{0.3, -0.4};  // |e|^2 = 0.25
    CHECK(psi(shifted, cg, cands[5].tx, 0.5) == doctest::Approx(0.5).epsilon(1e-12));

    Philox rng(31, 0);
    for (int t = 0; t < 200; ++t) {
        const auto& c = cands[rng.next_below(16)];
        const auto r = noisy(filtered(cg, c.tx), 0.4, rng);
        CHECK(psi(r, cg, c.tx, 0.4) ==
              doctest::Approx(psi_oracle(r, cg, c.tx, 0.4)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(psi(y, cg, cands[0].tx, 0.0), std::invalid_argument);
}

TEST_CASE("llrs match an independent log-sum-exp oracle") {
    for (const auto& p : {params(Design::tra, 1, 4, 0.8), params(Design::im2, 1, 4, 0.8),
                          params(Design::im3, 1, 8, 0.8, 4, 2), params(Design::tra, 3, 4, 0.8)}) {
        const auto s = make_scheme(p);
        const auto cg = correlation_matrix(12, 0.8).subblock(1, 4);
        SubblockDetector det(s, cg);
        const auto& cands = det.candidates();

        Philox rng(32, 0);
        const double n0 = 0.6;
        for (int t = 0; t < 50; ++t) {
            const auto& truth = cands[rng.next_below(static_cast<std::uint32_t>(cands.size()))];
            const auto r = noisy(filtered(cg, truth.tx), n0, rng);

            std::vector<double> idx(s.l1), dat(s.l2);
            det.llrs(r, n0, idx, dat);

            for (int b = 0; b < s.l1 + s.l2; ++b) {
                double num = 0, den = 0;
                for (const auto& c : cands) {
                    const double w = std::exp(-psi_oracle(r, cg, c.tx, n0));
                    const bool bit = b < s.l1 ? c.index_bits[b] : c.data_bits[b - s.l1];
                    (bit ? den : num) += w;
                }
                const double want = std::clamp(std::log(num) - std::log(den), -50.0, 50.0);
                const double got = b < s.l1 ? idx[b] : dat[b - s.l1];
                CHECK(got == doctest::Approx(want).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("noise-free llrs point at the transmitted bits") {
    for (const auto& p : {params(Design::tra, 1, 4, 0.67), params(Design::im1, 1, 16, 0.675),
                          params(Design::im2, 2, 4, 0.75), params(Design::im3, 1, 4, 0.67, 2, 2)}) {
        const auto s = make_scheme(p);
        const auto cg = correlation_matrix(12, s.alpha()).subblock(0, 4);
        SubblockDetector det(s, cg);
        for (const auto& truth : det.candidates()) {
            const auto r = filtered(cg, truth.tx);
            std::vector<double> idx(s.l1), dat(s.l2);
            det.llrs(r, 1e-2, idx, dat);
            for (int b = 0; b < s.l1; ++b) CHECK((idx[b] > 0) == (truth.index_bits[b] == 0));
            for (int b = 0; b < s.l2; ++b) CHECK((dat[b] > 0) == (truth.data_bits[b] == 0));
        }
    }
}

TEST_CASE("zero input at alpha = 1 gives all-zero llrs for tra [4,1] psk") {
    const auto s = make_scheme(params(Design::tra, 1, 4, 1.0));
    const auto cg = correlation_matrix(12, 1.0).subblock(0, 4);
    SubblockDetector det(s, cg);

    // Premise: all candidate metrics coincide on the zero input.
    const std::vector<cplx> zero(4, cplx{});
    double first = -1;
    for (const auto& c : det.candidates()) {
        const double v = psi_oracle(zero, cg, c.tx, 1.0);
        if (first < 0) first = v;
        CHECK(v == doctest::Approx(first).epsilon(1e-12));
    }

    std::vector<double> idx(s.l1), dat(s.l2);
    det.llrs(zero, 1.0, idx, dat);
    for (double v : idx) CHECK(std::abs(v) < 1e-12);
    for (double v : dat) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("zero input data llrs vanish by psk symmetry even with ici") {
    const auto s = make_scheme(params(Design::tra, 1, 4, 0.8));
    const auto cg = correlation_matrix(12, 0.8).subblock(0, 4);
    SubblockDetector det(s, cg);
    const std::vector<cplx> zero(4, cplx{});
    std::vector<double> idx(s.l1), dat(s.l2);
    det.llrs(zero, 1.0, idx, dat);
    for (double v : dat) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("hard detection: noise-free exhaustive recovery and oracle agreement") {
    for (const auto& p : {params(Design::tra, 1, 4, 0.67), params(Design::im2, 1, 4, 0.67),
                          params(Design::im3, 2, 4, 0.75, 2, 4, 2), params(Design::m2, 1, 16, 0.675)}) {
        const auto s = make_scheme(p);
        const auto cg = correlation_matrix(12, s.alpha()).subblock(0, 4);
        SubblockDetector det(s, cg);
        const auto& cands = det.candidates();

        for (const auto& truth : cands) {
            const auto hard = det.hard(filtered(cg, truth.tx));
            CHECK(hard.index_bits == truth.index_bits);
            CHECK(hard.data_bits == truth.data_bits);
        }

        Philox rng(33, 0);
        for (int t = 0; t < 500; ++t) {
            const auto& truth = cands[rng.next_below(static_cast<std::uint32_t>(cands.size()))];
            const auto r = noisy(filtered(cg, truth.tx), 0.5, rng);
            const auto hard = det.hard(r);
            // independent argmin
            int best = 0;
            double bestv = 1e300;
            for (std::size_t c = 0; c < cands.size(); ++c) {
                const double v = psi_oracle(r, cg, cands[c].tx, 1.0);
                if (v < bestv) {
                    bestv = v;
                    best = static_cast<int>(c);
                }
            }
            CHECK(hard.candidate == best);
        }
    }
}

TEST_CASE("llr and hard decisions agree on noise-free input at tiny n0") {
    const auto s = make_scheme(params(Design::im2, 1, 16, 0.675));
    const auto cg = correlation_matrix(12, 0.675).subblock(0, 4);
    SubblockDetector det(s, cg);
    for (const auto& truth : det.candidates()) {
        const auto r = filtered(cg, truth.tx);
        const auto hard = det.hard(r);
        std::vector<double> idx(s.l1), dat(s.l2);
        det.llrs(r, 1e-6, idx, dat);
        for (int b = 0; b < s.l1; ++b) CHECK((idx[b] < 0) == (hard.index_bits[b] == 1));
        for (int b = 0; b < s.l2; ++b) CHECK((dat[b] < 0) == (hard.data_bits[b] == 1));
    }
}

TEST_CASE("llrs stay finite and clipped under extreme noise levels") {
    const auto s = make_scheme(params(Design::im3, 1, 16, 0.6, 4, 4));
    const auto cg = correlation_matrix(12, 0.6).subblock(0, 4);
    SubblockDetector det(s, cg);
    Philox rng(34, 0);
    for (double n0 : {1e-9, 1e9}) {
        for (int t = 0; t < 100; ++t) {
            std::vector<cplx> r(4);
            for (auto& v : r) v = {4 * (rng.next_double() - 0.5), 4 * (rng.next_double() - 0.5)};
            std::vector<double> idx(s.l1), dat(s.l2);
            det.llrs(r, n0, idx, dat);
            for (double v : idx) {
                CHECK(std::isfinite(v));
                CHECK(std::abs(v) <= 50.0);
            }
            for (double v : dat) {
                CHECK(std::isfinite(v));
                CHECK(std::abs(v) <= 50.0);
            }
        }
    }
}

TEST_CASE("max-log variant tracks the exact llrs at high snr") {
    const auto s = make_scheme(params(Design::tra, 1, 4, 0.8));
    const auto cg = correlation_matrix(12, 0.8).subblock(0, 4);
    SubblockDetector det(s, cg);
    Philox rng(35, 0);
    const double n0 = 0.02;
    for (int t = 0; t < 50; ++t) {
        const auto& truth = det.candidates()[rng.next_below(16)];
        const auto r = noisy(filtered(cg, truth.tx), n0, rng);
        std::vector<double> i1(s.l1), d1(s.l2), i2(s.l1), d2(s.l2);
        det.llrs(r, n0, i1, d1, false);
        det.llrs(r, n0, i2, d2, true);
        for (int b = 0; b < s.l1; ++b) CHECK((i1[b] > 0) == (i2[b] > 0));
        for (int b = 0; b < s.l2; ++b) CHECK((d1[b] > 0) == (d2[b] > 0));
    }
}

TEST_CASE("detect_block splits subblocks independently and deterministically") {
    const auto s = make_scheme(params(Design::im2, 1, 4, 1.0));
    const auto c = correlation_matrix(8, 1.0);
    const auto cm = carrier_matrix(8, 1.0);

    Philox rng(36, 0);
    const auto cands = enumerate_candidates(s);
    const double n0 = 0.25;  // 6 dB with unit symbol energy
    int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const auto& a = cands[rng.next_below(16)];
        const auto& b = cands[rng.next_below(16)];
        std::vector<cplx> sblk(8);
        std::copy(a.tx.begin(), a.tx.end(), sblk.begin());
        std::copy(b.tx.begin(), b.tx.end(), sblk.begin() + 4);
        const auto y = noisy(modulate(cm, sblk), n0, rng);
        const auto r = demodulate(cm, y);

        const auto frame = detect_block(r, s, c, n0);
        REQUIRE(frame.index_llrs.size() == 2);
        REQUIRE(frame.data_llrs.size() == 2);

        const auto frame2 = detect_block(r, s, c, n0);
        CHECK(frame.index_llrs == frame2.index_llrs);
        CHECK(frame.data_llrs == frame2.data_llrs);

        // At alpha = 1 per-subblock hard decisions equal whole-block ML.
        std::vector<std::uint8_t> sub_bits;
        for (int g = 0; g < 2; ++g) {
            const auto hard =
                hard_detect(std::span<const cplx>(r).subspan(4 * g, 4), s, c.subblock(g, 4));
            sub_bits.insert(sub_bits.end(), hard.index_bits.begin(), hard.index_bits.end());
            sub_bits.insert(sub_bits.end(), hard.data_bits.begin(), hard.data_bits.end());
        }
        // exhaustive joint ML over candidate pairs (C = I at alpha = 1)
        double bestv = 1e300;
        std::vector<std::uint8_t> ml_bits;
        for (const auto& ca : cands) {
            for (const auto& cb : cands) {
                double v = 0;
                for (int i = 0; i < 4; ++i) v += std::norm(r[i] - ca.tx[i]);
                for (int i = 0; i < 4; ++i) v += std::norm(r[4 + i] - cb.tx[i]);
                if (v < bestv) {
                    bestv = v;
                    ml_bits.clear();
                    ml_bits.insert(ml_bits.end(), ca.index_bits.begin(), ca.index_bits.end());
                    ml_bits.insert(ml_bits.end(), ca.data_bits.begin(), ca.data_bits.end());
                    ml_bits.insert(ml_bits.end(), cb.index_bits.begin(), cb.index_bits.end());
                    ml_bits.insert(ml_bits.end(), cb.data_bits.begin(), cb.data_bits.end());
                }
            }
        }
        CHECK(sub_bits == ml_bits);
    }
}
