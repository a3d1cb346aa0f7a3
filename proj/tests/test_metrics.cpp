#include <doctest.h>

#include <cmath>
#include <vector>

#include "sefdm/carrier.hpp"
#include "sefdm/harness.hpp"
#include "sefdm/metrics.hpp"
#include "sefdm/rng.hpp"

using namespace sefdm;

TEST_CASE("papr basics") {
    const std::vector<cplx> flat(12, cplx{0.3, -0.4});
    CHECK(papr(flat) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<cplx> spike(12, cplx{});
    spike[4] = {2.0, 0.0};
    CHECK(papr(spike) == doctest::Approx(12.0).epsilon(1e-12));

    const std::vector<cplx> zero(12, cplx{});
    CHECK_THROWS_AS(papr(zero), std::invalid_argument);
}

TEST_CASE("a single active subcarrier has 0 dB papr") {
    const auto cm = carrier_matrix(12, 0.8);
    for (int k : {0, 3, 11}) {
        std::vector<cplx> s(12, cplx{});
        s[k] = {1.7, -0.4};
        CHECK(papr(modulate(cm, s)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("papr is always >= 1, equal only for constant modulus") {
    Philox rng(41, 0);
    const auto cm = carrier_matrix(12, 0.67);
    for (int t = 0; t < 200; ++t) {
        std::vector<cplx> s(12);
        for (auto& v : s) v = {rng.next_double() - 0.5, rng.next_double() - 0.5};
        CHECK(papr(modulate(cm, s)) >= 1.0 - 1e-12);
    }
}

TEST_CASE("ccdf examples and properties") {
    const std::vector<double> zeros(100, 0.0);
    const std::vector<double> th = {-1.0, 1.0};
    const auto curve = ccdf(zeros, th);
    CHECK(curve.prob[0] == 1.0);   // below every sample
    CHECK(curve.prob[1] == 0.0);   // above every sample

    Philox rng(42, 0);
    std::vector<double> samples(5000);
    for (auto& s : samples) s = 10.0 * rng.next_double();
    std::vector<double> grid;
    for (double g = -1.0; g <= 11.0; g += 0.25) grid.push_back(g);
    const auto c2 = ccdf(samples, grid);
    for (std::size_t i = 0; i < c2.prob.size(); ++i) {
        CHECK(c2.prob[i] >= 0.0);
        CHECK(c2.prob[i] <= 1.0);
        if (i) CHECK(c2.prob[i] <= c2.prob[i - 1]);
    }
}

TEST_CASE("ccdf quantile lookup") {
    std::vector<double> s;
    for (int i = 0; i < 1000; ++i) s.push_back(i * 0.01);  // uniform 0..9.99
    const double g = ccdf_gamma_at(s, 0.01);
    CHECK(g == doctest::Approx(9.89).epsilon(0.01));
    CHECK_THROWS_AS(ccdf_gamma_at({}, 0.01), std::invalid_argument);
}

TEST_CASE("spectral efficiency reference points") {
    const auto tra41 = make_scheme(preset("se0.75/tra41").scheme);
    CHECK(spectral_efficiency(tra41, 1.0) == doctest::Approx(1.0 / 0.67).epsilon(1e-12));
    CHECK(std::abs(spectral_efficiency(tra41, 1.0) - 1.5) < 0.01);

    const auto m2 = make_scheme(preset("se1.1/m2").scheme);
    CHECK(spectral_efficiency(m2, 1.0) == doctest::Approx((1.0 / 0.675) * 6.0 / 4.0).epsilon(1e-12));

    const auto tra43 = make_scheme(preset("se1.25/tra43").scheme);
    CHECK(spectral_efficiency(tra43, 0.5) == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("complexity table values") {
    auto theta = [](const char* p) { return complexity(make_scheme(preset(p).scheme)).theta; };
    CHECK(theta("se0.75/tra41") == 4);
    CHECK(theta("se0.75/im2") == 4);
    CHECK(theta("se1/m1") == 7);
    CHECK(theta("se1/im1") == 7);
    CHECK(theta("se1.1/m2") == 11);
    CHECK(theta("se1.1/im3") == 11);
    CHECK(theta("se1/tra42") == 11);
    CHECK(theta("se1/im2-23") == 11);
    CHECK(theta("se1.1/tra43") == 32);
    CHECK(theta("se0.75/ofdm-im") == 11);
    CHECK(theta("se1/ofdm-im") == 32);

    CHECK(complexity(make_scheme(preset("se1/m1").scheme)).raw == doctest::Approx(6.4));
    CHECK(complexity(make_scheme(preset("se1.1/m2").scheme)).raw ==
          doctest::Approx(4.0 * 16.0 / 6.0));
}

TEST_CASE("ber tally arithmetic") {
    BerTally t;
    std::vector<std::uint8_t> a(100, 0), b(100, 0);
    tally_bits(t, a, b, a, b);
    CHECK(t.avg_ber() == 0.0);

    std::vector<std::uint8_t> inv(100, 1);
    BerTally t2;
    tally_bits(t2, a, a, inv, inv);
    CHECK(t2.avg_ber() == 1.0);

    BerTally t3;
    std::vector<std::uint8_t> idx_tx(100, 0), idx_rx(100, 0), dat(300, 0);
    idx_rx[7] = 1;
    tally_bits(t3, idx_tx, dat, idx_rx, dat);
    CHECK(t3.index_ber() == doctest::Approx(0.01));
    CHECK(t3.data_ber() == 0.0);
    CHECK(t3.avg_ber() == doctest::Approx(0.0025));

    BerTally merged;
    merged.merge(t3);
    merged.merge(t3);
    CHECK(merged.index_errors == 2);
    CHECK(merged.total_bits() == 800);

    std::vector<std::uint8_t> short_rx(99, 0);
    CHECK_THROWS_AS(tally_bits(t3, idx_tx, dat, short_rx, dat), std::invalid_argument);
}
