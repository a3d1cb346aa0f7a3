#include "sefdm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sefdm {

void tally_bits(BerTally& t, std::span<const std::uint8_t> tx_index,
                std::span<const std::uint8_t> tx_data, std::span<const std::uint8_t> rx_index,
                std::span<const std::uint8_t> rx_data) {
    if (tx_index.size() != rx_index.size() || tx_data.size() != rx_data.size())
        throw std::invalid_argument("tally_bits: stream length mismatch");
    for (std::size_t i = 0; i < tx_index.size(); ++i)
        t.index_errors += (tx_index[i] ^ rx_index[i]) & 1;
    for (std::size_t i = 0; i < tx_data.size(); ++i)
        t.data_errors += (tx_data[i] ^ rx_data[i]) & 1;
    t.index_bits += tx_index.size();
    t.data_bits += tx_data.size();
}

double papr(std::span<const cplx> x) {
    double peak = 0.0, mean = 0.0;
    for (const auto& v : x) {
        const double p = std::norm(v);
        peak = std::max(peak, p);
        mean += p;
    }
    if (x.empty() || peak == 0.0) throw std::invalid_argument("papr: all-zero input");
    mean /= static_cast<double>(x.size());
    return peak / mean;
}

CcdfCurve ccdf(std::span<const double> papr_db, std::span<const double> thresholds_db) {
    if (papr_db.empty()) throw std::invalid_argument("ccdf: need at least one sample");
    CcdfCurve out;
    out.n_samples = papr_db.size();
    out.gamma_db.assign(thresholds_db.begin(), thresholds_db.end());
    out.prob.resize(out.gamma_db.size());
    for (std::size_t i = 0; i < out.gamma_db.size(); ++i) {
        std::size_t count = 0;
        for (const double s : papr_db)
            if (s > out.gamma_db[i]) ++count;
        out.prob[i] = static_cast<double>(count) / static_cast<double>(papr_db.size());
    }
    return out;
}

double ccdf_gamma_at(std::vector<double> papr_db, double prob) {
    if (papr_db.empty()) throw std::invalid_argument("ccdf_gamma_at: no samples");
    if (!(prob > 0.0) || prob >= 1.0) throw std::invalid_argument("ccdf_gamma_at: prob in (0,1)");
    std::sort(papr_db.begin(), papr_db.end());
    // The (1 - prob) sample quantile with linear interpolation.
    const double pos = (1.0 - prob) * static_cast<double>(papr_db.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= papr_db.size()) return papr_db.back();
    const double frac = pos - static_cast<double>(lo);
    return papr_db[lo] * (1.0 - frac) + papr_db[lo + 1] * frac;
}

double spectral_efficiency(const SchemeSpec& scheme, double coding_rate) {
    return (1.0 / scheme.alpha()) * coding_rate * scheme.l() / scheme.k();
}

Complexity complexity(const SchemeSpec& scheme) {
    double pw = 1.0;
    for (int i = 0; i < scheme.ka_eff; ++i) pw *= scheme.m_eff;
    const double raw = scheme.u() * pw / scheme.l();
    return {static_cast<long>(std::ceil(raw - 1e-12)), raw};
}

}  // namespace sefdm
