#include "sefdm/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace sefdm {

namespace {

// Trials are merged wave by wave; the wave size is fixed so the set of
// simulated trials (and therefore every output byte) does not depend on the
// worker count.
constexpr int kWaveTrials = 16;
constexpr int kUncodedBlocksPerTrial = 50;
constexpr std::uint64_t kStreamTagBer = 1;
constexpr std::uint64_t kStreamTagPapr = 2;

std::uint64_t stream_id(std::uint64_t tag, std::uint64_t point, std::uint64_t trial) {
    return (tag << 56) | (point << 40) | trial;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(trial) for trial in [0, count) on `workers` threads.
template <typename Fn>
void parallel_for(int workers, std::uint64_t count, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::uint64_t t = 0; t < count; ++t) fn(t);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t t = next.fetch_add(1);
            if (t >= count) return;
            fn(t);
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<std::uint64_t>(count, workers));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

int bits_to_int(std::span<const std::uint8_t> bits) {
    int v = 0;
    for (const auto b : bits) v = (v << 1) | (b & 1);
    return v;
}

const char* channel_name(ChannelKind c) {
    return c == ChannelKind::awgn ? "awgn" : "paper3tap";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

Simulator::Simulator(const SimConfig& cfg)
    : cfg_(cfg),
      scheme_(make_scheme(cfg.scheme)),
      cm_(carrier_matrix(cfg.n, cfg.scheme.alpha)),
      cands_(enumerate_candidates(scheme_)) {
    const int k = scheme_.k();
    if (cfg.n % k != 0) throw std::invalid_argument("Simulator: N must be a multiple of K");
    g_ = cfg.n / k;

    // Detection matrix: the subcarrier correlation for AWGN, or the effective
    // matched-filter response of the circulant channel under perfect CSI.
    CMat response;
    if (cfg.channel == ChannelKind::paper3tap) {
        multipath_ = paper_three_tap();
        response = effective_correlation_centered(cm_, *multipath_);
    } else {
        response = correlation_matrix(cfg.n, cfg.scheme.alpha).c;
    }
    detectors_.reserve(static_cast<std::size_t>(g_));
    for (int g = 0; g < g_; ++g)
        detectors_.emplace_back(scheme_, sub_block(response, g * k, g * k, k, k));

    if (cfg.coding.enabled) {
        code_ = build_code(cfg.coding.n, cfg.coding.seed);
        const int bits_idx = g_ * scheme_.l1;
        const int bits_dat = g_ * scheme_.l2;
        if (code_->n % bits_idx != 0 || code_->n % bits_dat != 0)
            throw std::invalid_argument(
                "Simulator: codeword length must be a multiple of the per-block coded bits");
        const int blocks_idx = code_->n / bits_idx;
        const int blocks_dat = code_->n / bits_dat;
        blocks_per_batch_ = std::lcm(blocks_idx, blocks_dat);
        idx_cw_per_batch_ = blocks_per_batch_ / blocks_idx;
        dat_cw_per_batch_ = blocks_per_batch_ / blocks_dat;
    } else {
        blocks_per_batch_ = kUncodedBlocksPerTrial;
    }
}

std::uint64_t Simulator::info_bits_per_batch() const {
    if (cfg_.coding.enabled)
        return static_cast<std::uint64_t>(idx_cw_per_batch_ + dat_cw_per_batch_) *
               static_cast<std::uint64_t>(code_->k);
    return static_cast<std::uint64_t>(blocks_per_batch_) * g_ * scheme_.l();
}

double Simulator::n0_at(double ebn0_db) const {
    return ebn0_to_n0(ebn0_db, scheme_, cfg_.coding_rate(), g_, cfg_.n);
}

void Simulator::transmit_block(std::span<const std::uint8_t> idx_bits,
                               std::span<const std::uint8_t> dat_bits,
                               std::vector<cplx>& s) const {
    const int k = scheme_.k();
    for (int g = 0; g < g_; ++g) {
        const int u = bits_to_int(idx_bits.subspan(static_cast<std::size_t>(g * scheme_.l1),
                                                   static_cast<std::size_t>(scheme_.l1)));
        const int v = bits_to_int(dat_bits.subspan(static_cast<std::size_t>(g * scheme_.l2),
                                                   static_cast<std::size_t>(scheme_.l2)));
        const auto& tx = cands_[static_cast<std::size_t>((u << scheme_.l2) | v)].tx;
        std::copy(tx.begin(), tx.end(), s.begin() + static_cast<std::ptrdiff_t>(g * k));
    }
}

ChainOutput Simulator::run_chain_once(double n0, std::uint64_t stream) const {
    Philox rng(cfg_.master_seed, stream);
    const int k = scheme_.k();
    const int bi = g_ * scheme_.l1;  // coded index bits per block
    const int bd = g_ * scheme_.l2;  // coded data bits per block

    ChainOutput out;
    out.papr_db.reserve(static_cast<std::size_t>(blocks_per_batch_));

    std::vector<std::uint8_t> coded_idx, coded_dat;
    std::vector<double> llr_idx, llr_dat;

    if (cfg_.coding.enabled) {
        out.tx_index.resize(static_cast<std::size_t>(idx_cw_per_batch_) * code_->k);
        out.tx_data.resize(static_cast<std::size_t>(dat_cw_per_batch_) * code_->k);
        for (auto& b : out.tx_index) b = rng.next_bit();
        for (auto& b : out.tx_data) b = rng.next_bit();

        coded_idx.reserve(static_cast<std::size_t>(idx_cw_per_batch_) * code_->n);
        coded_dat.reserve(static_cast<std::size_t>(dat_cw_per_batch_) * code_->n);
        for (int i = 0; i < idx_cw_per_batch_; ++i) {
            const auto cw = encode(*code_, std::span<const std::uint8_t>(out.tx_index)
                                               .subspan(static_cast<std::size_t>(i) * code_->k,
                                                        static_cast<std::size_t>(code_->k)));
            coded_idx.insert(coded_idx.end(), cw.begin(), cw.end());
        }
        for (int i = 0; i < dat_cw_per_batch_; ++i) {
            const auto cw = encode(*code_, std::span<const std::uint8_t>(out.tx_data)
                                               .subspan(static_cast<std::size_t>(i) * code_->k,
                                                        static_cast<std::size_t>(code_->k)));
            coded_dat.insert(coded_dat.end(), cw.begin(), cw.end());
        }
        llr_idx.resize(coded_idx.size());
        llr_dat.resize(coded_dat.size());
    } else {
        out.tx_index.resize(static_cast<std::size_t>(blocks_per_batch_) * bi);
        out.tx_data.resize(static_cast<std::size_t>(blocks_per_batch_) * bd);
        for (auto& b : out.tx_index) b = rng.next_bit();
        for (auto& b : out.tx_data) b = rng.next_bit();
        out.rx_index.resize(out.tx_index.size());
        out.rx_data.resize(out.tx_data.size());
    }

    const std::span<const std::uint8_t> idx_stream =
        cfg_.coding.enabled ? std::span<const std::uint8_t>(coded_idx)
                            : std::span<const std::uint8_t>(out.tx_index);
    const std::span<const std::uint8_t> dat_stream =
        cfg_.coding.enabled ? std::span<const std::uint8_t>(coded_dat)
                            : std::span<const std::uint8_t>(out.tx_data);

    std::vector<cplx> s(static_cast<std::size_t>(cfg_.n));
    for (int b = 0; b < blocks_per_batch_; ++b) {
        transmit_block(idx_stream.subspan(static_cast<std::size_t>(b) * bi, static_cast<std::size_t>(bi)),
                       dat_stream.subspan(static_cast<std::size_t>(b) * bd, static_cast<std::size_t>(bd)), s);
        std::vector<cplx> x = modulate(cm_, s);
        out.papr_db.push_back(to_db(papr(x)));

        if (multipath_) x = multipath_apply_centered(x, *multipath_);
        const std::vector<cplx> y = awgn(x, n0, rng);
        const std::vector<cplx> r = demodulate(cm_, y);

        for (int g = 0; g < g_; ++g) {
            const auto rg = std::span<const cplx>(r).subspan(static_cast<std::size_t>(g * k),
                                                             static_cast<std::size_t>(k));
            if (cfg_.coding.enabled) {
                detectors_[static_cast<std::size_t>(g)].llrs(
                    rg, n0,
                    std::span<double>(llr_idx).subspan(
                        static_cast<std::size_t>(b) * bi + static_cast<std::size_t>(g * scheme_.l1),
                        static_cast<std::size_t>(scheme_.l1)),
                    std::span<double>(llr_dat).subspan(
                        static_cast<std::size_t>(b) * bd + static_cast<std::size_t>(g * scheme_.l2),
                        static_cast<std::size_t>(scheme_.l2)));
            } else {
                const auto hard = detectors_[static_cast<std::size_t>(g)].hard(rg);
                std::copy(hard.index_bits.begin(), hard.index_bits.end(),
                          out.rx_index.begin() + static_cast<std::ptrdiff_t>(b) * bi + g * scheme_.l1);
                std::copy(hard.data_bits.begin(), hard.data_bits.end(),
                          out.rx_data.begin() + static_cast<std::ptrdiff_t>(b) * bd + g * scheme_.l2);
            }
        }
    }

    if (cfg_.coding.enabled) {
        out.rx_index.reserve(out.tx_index.size());
        out.rx_data.reserve(out.tx_data.size());
        for (int i = 0; i < idx_cw_per_batch_; ++i) {
            const auto res = decode(*code_,
                                    std::span<const double>(llr_idx).subspan(
                                        static_cast<std::size_t>(i) * code_->n,
                                        static_cast<std::size_t>(code_->n)),
                                    cfg_.coding.max_iter);
            out.rx_index.insert(out.rx_index.end(), res.info.begin(), res.info.end());
        }
        for (int i = 0; i < dat_cw_per_batch_; ++i) {
            const auto res = decode(*code_,
                                    std::span<const double>(llr_dat).subspan(
                                        static_cast<std::size_t>(i) * code_->n,
                                        static_cast<std::size_t>(code_->n)),
                                    cfg_.coding.max_iter);
            out.rx_data.insert(out.rx_data.end(), res.info.begin(), res.info.end());
        }
    }
    return out;
}

PointResult Simulator::run_point(double ebn0_db, std::uint64_t point_index) const {
    const double n0 = n0_at(ebn0_db);
    const int workers = resolve_workers(cfg_.workers);

    PointResult pr;
    pr.ebn0_db = ebn0_db;

    std::uint64_t trial = 0;
    for (;;) {
        std::vector<BerTally> slot(static_cast<std::size_t>(kWaveTrials));
        std::vector<std::uint64_t> slot_blocks(static_cast<std::size_t>(kWaveTrials), 0);
        parallel_for(workers, kWaveTrials, [&](std::uint64_t i) {
            const auto chain =
                run_chain_once(n0, stream_id(kStreamTagBer, point_index, trial + i));
            tally_bits(slot[static_cast<std::size_t>(i)], chain.tx_index, chain.tx_data,
                       chain.rx_index, chain.rx_data);
            slot_blocks[static_cast<std::size_t>(i)] = chain.papr_db.size();
        });
        for (int i = 0; i < kWaveTrials; ++i) {
            pr.tally.merge(slot[static_cast<std::size_t>(i)]);
            pr.blocks += slot_blocks[static_cast<std::size_t>(i)];
        }
        trial += kWaveTrials;

        if (pr.tally.total_errors() >= cfg_.stop.min_errors) break;
        if (pr.tally.total_bits() >= cfg_.stop.max_bits) {
            pr.hit_max_bits = true;
            break;
        }
    }

    const double p = pr.tally.avg_ber();
    const double bits = static_cast<double>(pr.tally.total_bits());
    pr.half_width = bits > 0 ? 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / bits) : 0.0;
    return pr;
}

TrialResult Simulator::run_ber_sweep() const {
    const auto t0 = std::chrono::steady_clock::now();
    TrialResult res;
    res.config = cfg_;
    for (std::size_t p = 0; p < cfg_.ebn0_grid_db.size(); ++p) {
        res.points.push_back(run_point(cfg_.ebn0_grid_db[p], p));
        if (cfg_.stop_below_avg_ber > 0.0 &&
            res.points.back().tally.avg_ber() < cfg_.stop_below_avg_ber)
            break;
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

Simulator::PaprRun Simulator::run_papr(std::size_t n_symbols,
                                       std::span<const double> thresholds_db) const {
    if (n_symbols == 0) throw std::invalid_argument("run_papr: need at least one symbol");
    const int workers = resolve_workers(cfg_.workers);
    constexpr std::size_t kBlocksPerTrial = 512;
    const std::uint64_t trials = (n_symbols + kBlocksPerTrial - 1) / kBlocksPerTrial;

    PaprRun run;
    run.samples_db.resize(n_symbols);
    const int k = scheme_.k();
    const int bi = g_ * scheme_.l1;
    const int bd = g_ * scheme_.l2;

    parallel_for(workers, trials, [&](std::uint64_t t) {
        Philox rng(cfg_.master_seed, stream_id(kStreamTagPapr, 0, t));
        std::vector<std::uint8_t> idx(static_cast<std::size_t>(bi));
        std::vector<std::uint8_t> dat(static_cast<std::size_t>(bd));
        std::vector<cplx> s(static_cast<std::size_t>(cfg_.n));
        const std::size_t begin = t * kBlocksPerTrial;
        const std::size_t end = std::min(begin + kBlocksPerTrial, n_symbols);
        for (std::size_t b = begin; b < end; ++b) {
            for (auto& bit : idx) bit = rng.next_bit();
            for (auto& bit : dat) bit = rng.next_bit();
            transmit_block(idx, dat, s);
            run.samples_db[b] = to_db(papr(modulate(cm_, s)));
        }
        (void)k;
    });
    run.curve = ccdf(run.samples_db, thresholds_db);
    return run;
}

SimConfig preset(const std::string& name) {
    SimConfig cfg;
    cfg.preset = name;
    auto& sp = cfg.scheme;

    auto grid = [&cfg](double lo, double hi, double step) {
        for (double v = lo; v <= hi + 1e-9; v += step) cfg.ebn0_grid_db.push_back(v);
    };

    const auto slash = name.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("unknown preset: " + name);
    const std::string se = name.substr(0, slash);
    const std::string sch = name.substr(slash + 1);

    if (se == "se0.75") {
        sp.m_a = 4;
        sp.alpha = 0.67;
        if (sch == "tra41") { sp.design = Design::tra; sp.ka = 1; }
        else if (sch == "im1") { sp.design = Design::im1; sp.ka = 1; }
        else if (sch == "im2") { sp.design = Design::im2; sp.ka = 1; }
        else if (sch == "im3") { sp.design = Design::im3; sp.ka = 1; sp.m_b = 2; sp.m_c = 2; }
        else if (sch == "ofdm-im") { sp.design = Design::ofdm_im; sp.ka = 2; sp.alpha = 1.0; }
        else throw std::invalid_argument("unknown preset: " + name);
        grid(0.0, 6.0, 0.5);
    } else if (se == "se1") {
        if (sch == "m1") { sp.design = Design::m1; sp.ka = 1; sp.m_a = 8; sp.alpha = 0.625; }
        else if (sch == "im1") { sp.design = Design::im1; sp.ka = 1; sp.m_a = 8; sp.alpha = 0.625; }
        else if (sch == "im2") { sp.design = Design::im2; sp.ka = 1; sp.m_a = 8; sp.alpha = 0.625; }
        else if (sch == "im3") { sp.design = Design::im3; sp.ka = 1; sp.m_a = 8; sp.m_b = 4; sp.m_c = 2; sp.alpha = 0.625; }
        else if (sch == "tra42") { sp.design = Design::tra; sp.ka = 2; sp.m_a = 4; sp.alpha = 0.75; }
        else if (sch == "im1-23") { sp.design = Design::im1; sp.ka = 2; sp.m_a = 4; sp.alpha = 0.75; }
        else if (sch == "im2-23") { sp.design = Design::im2; sp.ka = 2; sp.m_a = 4; sp.alpha = 0.75; }
        else if (sch == "im3-23") { sp.design = Design::im3; sp.ka = 2; sp.m_a = 4; sp.m_b = 2; sp.m_c = 4; sp.m_d = 2; sp.alpha = 0.75; }
        else if (sch == "ofdm-im") { sp.design = Design::ofdm_im; sp.ka = 3; sp.m_a = 4; sp.alpha = 1.0; }
        else throw std::invalid_argument("unknown preset: " + name);
        grid(0.0, 8.0, 0.5);
    } else if (se == "se1.1") {
        if (sch == "tra43") { sp.design = Design::tra; sp.ka = 3; sp.m_a = 4; sp.alpha = 0.9; }
        else if (sch == "m2") { sp.design = Design::m2; sp.ka = 1; sp.m_a = 16; sp.alpha = 0.675; }
        else if (sch == "im1") { sp.design = Design::im1; sp.ka = 1; sp.m_a = 16; sp.alpha = 0.675; }
        else if (sch == "im2") { sp.design = Design::im2; sp.ka = 1; sp.m_a = 16; sp.alpha = 0.675; }
        else if (sch == "im3") { sp.design = Design::im3; sp.ka = 1; sp.m_a = 16; sp.m_b = 4; sp.m_c = 4; sp.alpha = 0.675; }
        else throw std::invalid_argument("unknown preset: " + name);
        grid(1.0, 9.0, 0.5);
    } else if (se == "se1.25") {
        if (sch == "tra43") { sp.design = Design::tra; sp.ka = 3; sp.m_a = 4; sp.alpha = 0.8; }
        else if (sch == "m2") { sp.design = Design::m2; sp.ka = 1; sp.m_a = 16; sp.alpha = 0.6; }
        else if (sch == "im1") { sp.design = Design::im1; sp.ka = 1; sp.m_a = 16; sp.alpha = 0.6; }
        else if (sch == "im2") { sp.design = Design::im2; sp.ka = 1; sp.m_a = 16; sp.alpha = 0.6; }
        else if (sch == "im3") { sp.design = Design::im3; sp.ka = 1; sp.m_a = 16; sp.m_b = 4; sp.m_c = 4; sp.alpha = 0.6; }
        else throw std::invalid_argument("unknown preset: " + name);
        grid(1.0, 10.0, 0.5);
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return cfg;
}

std::vector<std::string> preset_names() {
    return {
        "se0.75/tra41", "se0.75/im1",    "se0.75/im2",    "se0.75/im3",    "se0.75/ofdm-im",
        "se1/m1",       "se1/im1",       "se1/im2",       "se1/im3",       "se1/tra42",
        "se1/im1-23",   "se1/im2-23",    "se1/im3-23",    "se1/ofdm-im",
        "se1.1/tra43",  "se1.1/m2",      "se1.1/im1",     "se1.1/im2",     "se1.1/im3",
        "se1.25/tra43", "se1.25/m2",     "se1.25/im1",    "se1.25/im2",    "se1.25/im3",
    };
}

std::string config_echo(const SimConfig& cfg) {
    std::string s = "# config:";
    s += " preset=" + (cfg.preset.empty() ? std::string("custom") : cfg.preset);
    const auto scheme = make_scheme(cfg.scheme);
    s += " scheme=\"" + scheme.name + "\"";
    s += " design=" + std::string(design_name(cfg.scheme.design));
    s += " k=" + std::to_string(cfg.scheme.k);
    s += " ka=" + std::to_string(cfg.scheme.ka);
    s += " ma=" + std::to_string(cfg.scheme.m_a);
    s += " mb=" + std::to_string(cfg.scheme.m_b);
    s += " mc=" + std::to_string(cfg.scheme.m_c);
    s += " md=" + std::to_string(cfg.scheme.m_d);
    s += " alpha=" + format_double(cfg.scheme.alpha);
    s += " n=" + std::to_string(cfg.n);
    s += " channel=" + std::string(channel_name(cfg.channel));
    if (cfg.coding.enabled)
        s += " coding=ldpc(n=" + std::to_string(cfg.coding.n) +
             ",seed=" + std::to_string(cfg.coding.seed) +
             ",iters=" + std::to_string(cfg.coding.max_iter) + ")";
    else
        s += " coding=none";
    s += " rate=" + format_double(cfg.coding_rate());
    s += " ebn0=";
    for (std::size_t i = 0; i < cfg.ebn0_grid_db.size(); ++i)
        s += (i ? "," : "") + format_double(cfg.ebn0_grid_db[i]);
    s += " stop=" + std::to_string(cfg.stop.min_errors) + "err/" +
         std::to_string(cfg.stop.max_bits) + "bits";
    if (cfg.stop_below_avg_ber > 0.0) s += " stop_below=" + format_double(cfg.stop_below_avg_ber);
    s += " seed=" + std::to_string(cfg.master_seed);
    s += " rng=" + std::string(Philox::kName);
    return s;
}

void write_ber_csv(std::ostream& os, const TrialResult& result) {
    os << config_echo(result.config) << "\n";
    os << "ebn0_db,index_ber,data_ber,avg_ber,bits_counted\n";
    for (const auto& p : result.points) {
        os << format_double(p.ebn0_db) << "," << format_double(p.tally.index_ber()) << ","
           << format_double(p.tally.data_ber()) << "," << format_double(p.tally.avg_ber()) << ","
           << p.tally.total_bits() << "\n";
    }
}

void write_ccdf_csv(std::ostream& os, const SimConfig& cfg, const CcdfCurve& curve) {
    os << config_echo(cfg) << "\n";
    os << "gamma_db,ccdf\n";
    for (std::size_t i = 0; i < curve.gamma_db.size(); ++i)
        os << format_double(curve.gamma_db[i]) << "," << format_double(curve.prob[i]) << "\n";
}

}  // namespace sefdm
