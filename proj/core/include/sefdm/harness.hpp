#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sefdm/carrier.hpp"
#include "sefdm/channel.hpp"
#include "sefdm/detector.hpp"
#include "sefdm/ldpc.hpp"
#include "sefdm/metrics.hpp"
#include "sefdm/pattern.hpp"

namespace sefdm {

enum class ChannelKind { awgn, paper3tap };

struct StopRule {
    std::uint64_t min_errors = 200;       // combined information-bit errors
    std::uint64_t max_bits = 10'000'000;  // hard cap per Eb/N0 point
};

struct CodingConfig {
    bool enabled = true;  // rate-1/2 LDPC, 50 BP iterations
    int n = 648;
    std::uint64_t seed = 1;
    int max_iter = 50;
};

struct SimConfig {
    std::string preset;  // echoed in outputs; empty for custom configs
    SchemeParams scheme;
    int n = 12;  // total subcarriers (N = K * G)
    ChannelKind channel = ChannelKind::awgn;
    CodingConfig coding;
    std::vector<double> ebn0_grid_db;
    StopRule stop;
    std::uint64_t master_seed = 1;
    int workers = 0;  // 0 = hardware concurrency
    // When > 0, remaining (higher) grid points are skipped once a point's
    // average BER falls below this value.
    double stop_below_avg_ber = 0.0;

    double coding_rate() const { return coding.enabled ? 0.5 : 1.0; }
};

// Named configurations: every scheme listed in the selected-spectral-efficiency
// study plus the OFDM-IM baselines, e.g. "se1.1/im2", "se0.75/ofdm-im".
SimConfig preset(const std::string& name);
std::vector<std::string> preset_names();

struct PointResult {
    double ebn0_db = 0.0;
    BerTally tally;
    std::uint64_t blocks = 0;
    double half_width = 0.0;  // 95% binomial CI on the average BER
    bool hit_max_bits = false;
};

struct TrialResult {
    SimConfig config;
    std::vector<PointResult> points;
    double wall_seconds = 0.0;
};

// One full pass of the transmit/receive chain for a batch of blocks.
struct ChainOutput {
    std::vector<std::uint8_t> tx_index, tx_data;  // information bits
    std::vector<std::uint8_t> rx_index, rx_data;
    std::vector<double> papr_db;  // one sample per transmitted block
};

// Owns everything that is precomputed once per configuration: scheme tables,
// carrier/correlation matrices, per-subblock detectors and the LDPC code.
// Trials are assigned counter-based RNG streams, so results are independent
// of the worker count and reproducible byte-for-byte.
class Simulator {
public:
    explicit Simulator(const SimConfig& cfg);

    // When coded, a batch spans whole codewords on both streams; uncoded
    // batches are a fixed number of blocks.
    ChainOutput run_chain_once(double n0, std::uint64_t stream) const;

    TrialResult run_ber_sweep() const;

    struct PaprRun {
        CcdfCurve curve;
        std::vector<double> samples_db;
    };
    PaprRun run_papr(std::size_t n_symbols, std::span<const double> thresholds_db) const;

    const SchemeSpec& scheme() const { return scheme_; }
    const SimConfig& config() const { return cfg_; }
    int blocks_per_batch() const { return blocks_per_batch_; }
    std::uint64_t info_bits_per_batch() const;
    double n0_at(double ebn0_db) const;

private:
    void transmit_block(std::span<const std::uint8_t> idx_bits,
                        std::span<const std::uint8_t> dat_bits, std::vector<cplx>& s) const;
    PointResult run_point(double ebn0_db, std::uint64_t point_index) const;

    SimConfig cfg_;
    SchemeSpec scheme_;
    CarrierMatrix cm_;
    int g_ = 0;
    std::vector<Candidate> cands_;  // transmit-side lookup, enumeration order
    std::vector<SubblockDetector> detectors_;
    std::optional<MultipathChannel> multipath_;
    std::optional<LdpcCode> code_;
    int blocks_per_batch_ = 0;
    int idx_cw_per_batch_ = 0, dat_cw_per_batch_ = 0;
};

// CSV emitters. Each file starts with a "# config: ..." comment carrying the
// full configuration, seed and generator name; identical configs produce
// byte-identical files.
std::string config_echo(const SimConfig& cfg);
void write_ber_csv(std::ostream& os, const TrialResult& result);
void write_ccdf_csv(std::ostream& os, const SimConfig& cfg, const CcdfCurve& curve);

}  // namespace sefdm
