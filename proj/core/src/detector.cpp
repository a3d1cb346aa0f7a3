#include "sefdm/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sefdm {

double psi(std::span<const cplx> rg, const CMat& cg, std::span<const cplx> sg, double n0) {
    if (!(n0 > 0.0)) throw std::invalid_argument("psi: n0 must be positive");
    const auto y = mat_vec(cg, sg);
    double d2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) d2 += std::norm(rg[i] - y[i]);
    return d2 / n0;
}

SubblockDetector::SubblockDetector(const SchemeSpec& scheme, const CMat& cg)
    : k_(scheme.k()), l1_(scheme.l1), l2_(scheme.l2), cands_(enumerate_candidates(scheme)) {
    if (cg.rows != k_ || cg.cols != k_)
        throw std::invalid_argument("SubblockDetector: correlation block must be K x K");
    filtered_.resize(cands_.size() * static_cast<std::size_t>(k_));
    for (std::size_t c = 0; c < cands_.size(); ++c) {
        const auto y = mat_vec(cg, cands_[c].tx);
        std::copy(y.begin(), y.end(), filtered_.begin() + static_cast<std::ptrdiff_t>(c * k_));
    }
}

void SubblockDetector::residuals(std::span<const cplx> rg, std::vector<double>& d2) const {
    d2.resize(cands_.size());
    const cplx* y = filtered_.data();
    for (std::size_t c = 0; c < cands_.size(); ++c, y += k_) {
        double acc = 0.0;
        for (int i = 0; i < k_; ++i) acc += std::norm(rg[static_cast<std::size_t>(i)] - y[i]);
        d2[c] = acc;
    }
}

void SubblockDetector::llrs(std::span<const cplx> rg, double n0, std::span<double> index_out,
                            std::span<double> data_out, bool max_log) const {
    if (!(n0 > 0.0)) throw std::invalid_argument("SubblockDetector::llrs: n0 must be positive");
    if (static_cast<int>(index_out.size()) != l1_ || static_cast<int>(data_out.size()) != l2_)
        throw std::invalid_argument("SubblockDetector::llrs: output span length mismatch");

    std::vector<double> d2;
    residuals(rg, d2);

    // Common shift by the minimum psi keeps every exponential in [0, 1];
    // the shift cancels in the ratio.
    const double d2min = *std::min_element(d2.begin(), d2.end());

    const int nbits = l1_ + l2_;
    std::vector<double> w0(static_cast<std::size_t>(nbits), 0.0);
    std::vector<double> w1(static_cast<std::size_t>(nbits), 0.0);
    if (max_log) {
        std::fill(w0.begin(), w0.end(), -std::numeric_limits<double>::infinity());
        std::fill(w1.begin(), w1.end(), -std::numeric_limits<double>::infinity());
    }

    for (std::size_t c = 0; c < cands_.size(); ++c) {
        const double e = (d2[c] - d2min) / n0;
        const auto& cand = cands_[c];
        if (max_log) {
            for (int b = 0; b < l1_; ++b) {
                auto& acc = cand.index_bits[static_cast<std::size_t>(b)] ? w1 : w0;
                acc[static_cast<std::size_t>(b)] = std::max(acc[static_cast<std::size_t>(b)], -e);
            }
            for (int b = 0; b < l2_; ++b) {
                auto& acc = cand.data_bits[static_cast<std::size_t>(b)] ? w1 : w0;
                acc[static_cast<std::size_t>(l1_ + b)] =
                    std::max(acc[static_cast<std::size_t>(l1_ + b)], -e);
            }
        } else {
            const double w = std::exp(-e);
            for (int b = 0; b < l1_; ++b)
                (cand.index_bits[static_cast<std::size_t>(b)] ? w1 : w0)[static_cast<std::size_t>(b)] += w;
            for (int b = 0; b < l2_; ++b)
                (cand.data_bits[static_cast<std::size_t>(b)] ? w1 : w0)[static_cast<std::size_t>(l1_ + b)] += w;
        }
    }

    auto finish = [&](double n, double d) {
        double l;
        if (max_log) {
            l = n - d;
        } else if (n == 0.0) {
            l = -kLlrClip;
        } else if (d == 0.0) {
            l = kLlrClip;
        } else {
            l = std::log(n) - std::log(d);
        }
        return std::clamp(l, -kLlrClip, kLlrClip);
    };
    for (int b = 0; b < l1_; ++b)
        index_out[static_cast<std::size_t>(b)] =
            finish(w0[static_cast<std::size_t>(b)], w1[static_cast<std::size_t>(b)]);
    for (int b = 0; b < l2_; ++b)
        data_out[static_cast<std::size_t>(b)] =
            finish(w0[static_cast<std::size_t>(l1_ + b)], w1[static_cast<std::size_t>(l1_ + b)]);
}

SubblockDetector::Hard SubblockDetector::hard(std::span<const cplx> rg) const {
    std::vector<double> d2;
    residuals(rg, d2);
    std::size_t best = 0;
    for (std::size_t c = 1; c < d2.size(); ++c)
        if (d2[c] < d2[best]) best = c;
    return {cands_[best].index_bits, cands_[best].data_bits, static_cast<int>(best)};
}

std::vector<double> index_llrs(std::span<const cplx> rg, const SchemeSpec& scheme, const CMat& cg,
                               double n0) {
    SubblockDetector det(scheme, cg);
    std::vector<double> idx(static_cast<std::size_t>(scheme.l1));
    std::vector<double> dat(static_cast<std::size_t>(scheme.l2));
    det.llrs(rg, n0, idx, dat);
    return idx;
}

std::vector<double> data_llrs(std::span<const cplx> rg, const SchemeSpec& scheme, const CMat& cg,
                              double n0) {
    SubblockDetector det(scheme, cg);
    std::vector<double> idx(static_cast<std::size_t>(scheme.l1));
    std::vector<double> dat(static_cast<std::size_t>(scheme.l2));
    det.llrs(rg, n0, idx, dat);
    return dat;
}

SubblockDetector::Hard hard_detect(std::span<const cplx> rg, const SchemeSpec& scheme,
                                   const CMat& cg) {
    return SubblockDetector(scheme, cg).hard(rg);
}

LlrFrame detect_block(std::span<const cplx> r, const SchemeSpec& scheme,
                      const CorrelationMatrix& c, double n0) {
    const int k = scheme.k();
    if (static_cast<int>(r.size()) != c.n || c.n % k != 0)
        throw std::invalid_argument("detect_block: N must equal K * G");
    const int g = c.n / k;

    LlrFrame frame;
    frame.index_llrs.resize(static_cast<std::size_t>(g));
    frame.data_llrs.resize(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) {
        SubblockDetector det(scheme, c.subblock(i, k));
        frame.index_llrs[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(scheme.l1));
        frame.data_llrs[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(scheme.l2));
        det.llrs(r.subspan(static_cast<std::size_t>(i * k), static_cast<std::size_t>(k)), n0,
                 frame.index_llrs[static_cast<std::size_t>(i)],
                 frame.data_llrs[static_cast<std::size_t>(i)]);
    }
    return frame;
}

}  // namespace sefdm
