#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sefdm/carrier.hpp"
#include "sefdm/pattern.hpp"

namespace sefdm {

// LLR output clip; sign decisions saturate long before this.
inline constexpr double kLlrClip = 50.0;

// Noise-normalized squared residual of one candidate subblock:
//   psi = (1/n0) * ||rg - cg * sg||^2
double psi(std::span<const cplx> rg, const CMat& cg, std::span<const cplx> sg, double n0);

struct LlrFrame {
    // [subblock][bit]; positive means bit 0 more likely. All values finite,
    // clipped to +-kLlrClip.
    std::vector<std::vector<double>> index_llrs;
    std::vector<std::vector<double>> data_llrs;
};

// Soft/hard detection over one subblock. The candidate list and the filtered
// vectors cg * tx are precomputed once per (scheme, correlation block) and
// reused for every received subblock; the per-call work is one residual norm
// per candidate plus a log-sum-exp per bit.
class SubblockDetector {
public:
    SubblockDetector(const SchemeSpec& scheme, const CMat& cg);

    // index_out/data_out must have length L1/L2. When max_log is set the
    // log-sum-exp collapses to a max (complexity experiments only).
    void llrs(std::span<const cplx> rg, double n0, std::span<double> index_out,
              std::span<double> data_out, bool max_log = false) const;

    struct Hard {
        std::vector<std::uint8_t> index_bits, data_bits;
        int candidate = 0;
    };
    // argmin psi; ties resolve to the lowest candidate index. The selection
    // does not depend on n0.
    Hard hard(std::span<const cplx> rg) const;

    const std::vector<Candidate>& candidates() const { return cands_; }
    int k() const { return k_; }

private:
    void residuals(std::span<const cplx> rg, std::vector<double>& d2) const;

    int k_, l1_, l2_;
    std::vector<Candidate> cands_;
    std::vector<cplx> filtered_;  // cands * k, flattened cg * tx
};

// Spec-level convenience wrappers around SubblockDetector.
std::vector<double> index_llrs(std::span<const cplx> rg, const SchemeSpec& scheme, const CMat& cg,
                               double n0);
std::vector<double> data_llrs(std::span<const cplx> rg, const SchemeSpec& scheme, const CMat& cg,
                              double n0);
SubblockDetector::Hard hard_detect(std::span<const cplx> rg, const SchemeSpec& scheme,
                                   const CMat& cg);

// Splits a demodulated block into G = N/K subblocks and detects each against
// the corresponding diagonal block of the correlation matrix.
LlrFrame detect_block(std::span<const cplx> r, const SchemeSpec& scheme,
                      const CorrelationMatrix& c, double n0);

}  // namespace sefdm
