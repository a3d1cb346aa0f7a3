#include "sefdm/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace sefdm {

double ebn0_to_n0(double ebn0_db, const SchemeSpec& scheme, double coding_rate, int g, int n) {
    if (!(coding_rate > 0.0) || coding_rate > 1.0)
        throw std::invalid_argument("ebn0_to_n0: coding rate must lie in (0, 1]");
    const double info_bits = coding_rate * scheme.l() * g;
    const double eb = static_cast<double>(n) / info_bits;
    return eb / std::pow(10.0, ebn0_db / 10.0);
}

std::vector<cplx> awgn(std::span<const cplx> x, double n0, Philox& rng) {
    std::vector<cplx> y(x.begin(), x.end());
    for (auto& v : y) v += rng.next_cnoise(n0);
    return y;
}

int MultipathChannel::max_delay() const {
    int d = 0;
    for (const auto& t : taps) d = std::max(d, t.delay);
    return d;
}

MultipathChannel paper_three_tap() {
    MultipathChannel ch;
    ch.taps = {{0, {0.9137, 0.0}}, {2, {0.3179, 0.0}}, {3, {0.0, -0.2532}}};
    ch.cp_len = 3;
    return ch;
}

std::vector<cplx> multipath_apply(std::span<const cplx> x, const MultipathChannel& ch) {
    const int n = static_cast<int>(x.size());
    const int cp = ch.cp_len;
    if (cp < ch.max_delay())
        throw std::invalid_argument("multipath_apply: cyclic prefix shorter than the delay spread");
    for (const auto& t : ch.taps)
        if (t.delay < 0) throw std::invalid_argument("multipath_apply: negative tap delay");

    std::vector<cplx> ext(static_cast<std::size_t>(n + cp));
    for (int i = 0; i < cp; ++i) ext[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(n - cp + i)];
    for (int i = 0; i < n; ++i) ext[static_cast<std::size_t>(cp + i)] = x[static_cast<std::size_t>(i)];

    std::vector<cplx> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        cplx acc{};
        for (const auto& t : ch.taps) {
            const int src = cp + i - t.delay;
            if (src >= 0) acc += t.gain * ext[static_cast<std::size_t>(src)];
        }
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

std::vector<cplx> frequency_response(const MultipathChannel& ch, int n_points) {
    if (n_points < 1) throw std::invalid_argument("frequency_response: n_points must be >= 1");
    std::vector<cplx> h(static_cast<std::size_t>(n_points));
    for (int f = 0; f < n_points; ++f) {
        cplx acc{};
        for (const auto& t : ch.taps) {
            const double ang = -2.0 * M_PI * static_cast<double>(f) * t.delay / n_points;
            acc += t.gain * cplx{std::cos(ang), std::sin(ang)};
        }
        h[static_cast<std::size_t>(f)] = acc;
    }
    return h;
}

std::vector<cplx> multipath_apply_centered(std::span<const cplx> x, const MultipathChannel& ch) {
    std::vector<cplx> shifted(x.begin(), x.end());
    for (std::size_t i = 1; i < shifted.size(); i += 2) shifted[i] = -shifted[i];
    auto y = multipath_apply(shifted, ch);
    for (std::size_t i = 1; i < y.size(); i += 2) y[i] = -y[i];
    return y;
}

CMat circulant_matrix(const MultipathChannel& ch, int n) {
    CMat h(n, n);
    for (const auto& t : ch.taps) {
        const int d = t.delay % n;
        for (int r = 0; r < n; ++r) h(r, (r - d + n) % n) += t.gain;
    }
    return h;
}

CMat effective_correlation(const CarrierMatrix& cm, const MultipathChannel& ch) {
    const CMat h = circulant_matrix(ch, cm.n);
    return mat_mul(herm(cm.phi), mat_mul(h, cm.phi));
}

CMat effective_correlation_centered(const CarrierMatrix& cm, const MultipathChannel& ch) {
    CMat h = circulant_matrix(ch, cm.n);
    // Conjugate by diag((-1)^n): the half-rate shift applied around the taps.
    for (int r = 0; r < h.rows; ++r)
        for (int c = 0; c < h.cols; ++c)
            if ((r + c) & 1) h(r, c) = -h(r, c);
    return mat_mul(herm(cm.phi), mat_mul(h, cm.phi));
}

}  // namespace sefdm
