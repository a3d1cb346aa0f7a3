#pragma once

#include <span>
#include <vector>

#include "sefdm/carrier.hpp"
#include "sefdm/pattern.hpp"
#include "sefdm/rng.hpp"

namespace sefdm {

// Eb/N0 -> per-sample complex noise variance. Pattern scaling keeps the
// average transmit power per sample at unity, so a block of N samples carries
// energy N and R*L*G information bits:
//   Eb = N / (R * L * G),   N0 = Eb / 10^(ebn0_db / 10).
double ebn0_to_n0(double ebn0_db, const SchemeSpec& scheme, double coding_rate, int g, int n);

// Y = X + W with W i.i.d. CN(0, n0).
std::vector<cplx> awgn(std::span<const cplx> x, double n0, Philox& rng);

struct MultipathChannel {
    struct Tap {
        int delay = 0;  // in samples
        cplx gain;
    };
    std::vector<Tap> taps;
    int cp_len = 0;

    int max_delay() const;
};

// The static three-path frequency-selective channel used for robustness
// checks: taps 0.9137 at 0, 0.3179 at 2Ts, -0.2532j at 3Ts, cyclic prefix 3.
MultipathChannel paper_three_tap();

// Cyclic-prefix transmission: prepend cp_len samples, convolve with the taps,
// strip the prefix. Net effect is circular convolution of x with the tap
// sequence. Throws if cp_len < max tap delay.
std::vector<cplx> multipath_apply(std::span<const cplx> x, const MultipathChannel& ch);

// Same transmission for the one-sided carrier synthesis: the taps describe
// the band-centered complex baseband, so the block is shifted down by half
// the sample rate, convolved, and shifted back. The half-rate shift is an
// integer number of bins, which keeps the cyclic-prefix circularity exact;
// it is equivalent to a circulant channel with taps h_d * (-1)^d.
std::vector<cplx> multipath_apply_centered(std::span<const cplx> x, const MultipathChannel& ch);

// Tap-sequence DFT on n_points uniform frequencies in [0, 1).
std::vector<cplx> frequency_response(const MultipathChannel& ch, int n_points);

// N x N circulant matrix H of the channel taps.
CMat circulant_matrix(const MultipathChannel& ch, int n);

// Effective correlation phi^H * H * phi seen by the matched-filter receiver
// under perfect CSI; its diagonal K x K blocks replace C^g in detection.
CMat effective_correlation(const CarrierMatrix& cm, const MultipathChannel& ch);

// Effective correlation for the centered-baseband transmission above.
CMat effective_correlation_centered(const CarrierMatrix& cm, const MultipathChannel& ch);

}  // namespace sefdm
