#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sefdm/constellation.hpp"
#include "sefdm/pattern.hpp"

namespace sefdm {

// Mergeable error counters; parallel workers produce partial tallies that
// merge associatively.
struct BerTally {
    std::uint64_t index_errors = 0, index_bits = 0;
    std::uint64_t data_errors = 0, data_bits = 0;

    void merge(const BerTally& o) {
        index_errors += o.index_errors;
        index_bits += o.index_bits;
        data_errors += o.data_errors;
        data_bits += o.data_bits;
    }
    double index_ber() const { return index_bits ? double(index_errors) / double(index_bits) : 0.0; }
    double data_ber() const { return data_bits ? double(data_errors) / double(data_bits) : 0.0; }
    double avg_ber() const {
        const std::uint64_t bits = index_bits + data_bits;
        return bits ? double(index_errors + data_errors) / double(bits) : 0.0;
    }
    std::uint64_t total_bits() const { return index_bits + data_bits; }
    std::uint64_t total_errors() const { return index_errors + data_errors; }
};

void tally_bits(BerTally& t, std::span<const std::uint8_t> tx_index,
                std::span<const std::uint8_t> tx_data, std::span<const std::uint8_t> rx_index,
                std::span<const std::uint8_t> rx_data);

// Peak-to-average power ratio over the discrete block samples, linear.
// Throws on an all-zero input.
double papr(std::span<const cplx> x);

inline double to_db(double lin) { return 10.0 * std::log10(lin); }

struct CcdfCurve {
    std::vector<double> gamma_db;
    std::vector<double> prob;  // Pr(PAPR > gamma)
    std::size_t n_samples = 0;
};

// Empirical exceedance curve of PAPR samples (dB) over the given thresholds.
CcdfCurve ccdf(std::span<const double> papr_db, std::span<const double> thresholds_db);

// gamma (dB) at which the empirical CCDF crosses `prob`, interpolated between
// order statistics; this is the quantile read off the paper-style CCDF plot.
double ccdf_gamma_at(std::vector<double> papr_db, double prob);

// (1/alpha) * (R * L / K) in bit/s/Hz.
double spectral_efficiency(const SchemeSpec& scheme, double coding_rate);

// Detection cost per coded bit, counted in candidate-metric evaluations:
// raw = U * M'^{K_A'} / L with the pattern-1 cardinality/count for the
// proposed designs. The published table rounds up, so theta = ceil(raw).
struct Complexity {
    long theta = 0;
    double raw = 0.0;
};
Complexity complexity(const SchemeSpec& scheme);

}  // namespace sefdm
