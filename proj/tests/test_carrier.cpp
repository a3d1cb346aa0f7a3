#include <doctest.h>

#include <cmath>

#include "sefdm/carrier.hpp"
#include "sefdm/rng.hpp"

using namespace sefdm;

namespace {

double max_abs_diff(const CMat& a, const CMat& b) {
    double d = 0;
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c) d = std::max(d, std::abs(a(r, c) - b(r, c)));
    return d;
}

std::vector<cplx> random_vec(int n, Philox& rng) {
    std::vector<cplx> v(n);
    for (auto& x : v) x = {rng.next_double() * 2 - 1, rng.next_double() * 2 - 1};
    return v;
}

}  // namespace

TEST_CASE("alpha = 1 gives an orthonormal carrier bank") {
    for (int n : {4, 12}) {
        const auto cm = carrier_matrix(n, 1.0);
        const auto gram = mat_mul(herm(cm.phi), cm.phi);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                CHECK(std::abs(gram(r, c) - (r == c ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("carrier entries are constant modulus 1/sqrt(N)") {
    const auto cm = carrier_matrix(12, 0.67);
    for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 12; ++c)
            CHECK(std::abs(cm.phi(r, c)) == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-12));
}

TEST_CASE("single active subcarrier is a pure complex exponential") {
    const int n = 12;
    const double a = 0.8;
    const auto cm = carrier_matrix(n, a);
    std::vector<cplx> s(n, cplx{});
    s[1] = 1.0;
    const auto x = modulate(cm, s);
    for (int t = 0; t < n; ++t) {
        const double ang = 2.0 * M_PI * a * t / n;
        CHECK(std::abs(x[t] - cplx{std::cos(ang), std::sin(ang)} / std::sqrt(12.0)) < 1e-12);
    }
}

TEST_CASE("modulate basics") {
    const auto cm = carrier_matrix(8, 1.0);
    std::vector<cplx> zero(8, cplx{});
    for (const auto& v : modulate(cm, zero)) CHECK(std::abs(v) == 0.0);

    std::vector<cplx> e3(8, cplx{});
    e3[3] = 1.0;
    double norm2 = 0;
    for (const auto& v : modulate(cm, e3)) norm2 += std::norm(v);
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("modulated energy equals S^H C S") {
    Philox rng(11, 0);
    const auto cm = carrier_matrix(12, 0.8);
    const auto corr = correlation_matrix(12, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_vec(12, rng);
        double ex = 0;
        for (const auto& v : modulate(cm, s)) ex += std::norm(v);
        const auto cs = mat_vec(corr.c, s);
        cplx quad{};
        for (int i = 0; i < 12; ++i) quad += std::conj(s[i]) * cs[i];
        CHECK(ex == doctest::Approx(quad.real()).epsilon(1e-10));
        CHECK(std::abs(quad.imag()) < 1e-10);
    }
}

TEST_CASE("closed-form correlation equals the gram matrix") {
    for (int n : {4, 12, 16}) {
        for (double a : {0.5, 0.6, 0.625, 0.67, 0.675, 0.75, 0.8, 0.9, 1.0}) {
            const auto cm = carrier_matrix(n, a);
            const auto gram = mat_mul(herm(cm.phi), cm.phi);
            const auto closed = correlation_matrix(n, a);
            CHECK(max_abs_diff(gram, closed.c) < 1e-12);
        }
    }
}

TEST_CASE("alpha d integer zeroes the off-diagonal entry") {
    const auto c = correlation_matrix(4, 0.5);
    CHECK(std::abs(c.c(0, 2)) < 1e-12);  // alpha * |k-n| = 1
    CHECK(std::abs(c.c(3, 1)) < 1e-12);
}

TEST_CASE("adjacent-entry value matches brute-force column inner product") {
    const int n = 12;
    const double a = 0.8;
    const auto cm = carrier_matrix(n, a);
    const auto c = correlation_matrix(n, a);
    cplx ip{};
    for (int t = 0; t < n; ++t) ip += std::conj(cm.phi(t, 3)) * cm.phi(t, 4);
    CHECK(std::abs(c.c(3, 4) - ip) < 1e-12);
}

TEST_CASE("correlation is hermitian with unit diagonal") {
    const auto c = correlation_matrix(12, 0.67);
    for (int r = 0; r < 12; ++r) {
        CHECK(std::abs(c.c(r, r) - 1.0) < 1e-12);
        for (int k = 0; k < 12; ++k) CHECK(std::abs(c.c(r, k) - std::conj(c.c(k, r))) < 1e-12);
    }
}

TEST_CASE("off-diagonal mass appears exactly when alpha < 1") {
    auto max_off = [](const CorrelationMatrix& c) {
        double m = 0;
        for (int r = 0; r < c.n; ++r)
            for (int k = 0; k < c.n; ++k)
                if (r != k) m = std::max(m, std::abs(c.c(r, k)));
        return m;
    };
    CHECK(max_off(correlation_matrix(12, 1.0)) < 1e-12);
    for (double a : {0.6, 0.67, 0.75, 0.8, 0.9})
        CHECK(max_off(correlation_matrix(12, a)) > 1e-3);
}

TEST_CASE("demodulate(modulate(S)) = C S") {
    Philox rng(12, 0);
    for (double a : {0.8, 1.0}) {
        const auto cm = carrier_matrix(12, a);
        const auto c = correlation_matrix(12, a);
        const auto s = random_vec(12, rng);
        const auto r = demodulate(cm, modulate(cm, s));
        const auto cs = mat_vec(c.c, s);
        for (int i = 0; i < 12; ++i) CHECK(std::abs(r[i] - cs[i]) < 1e-12);
        if (a == 1.0)
            for (int i = 0; i < 12; ++i) CHECK(std::abs(r[i] - s[i]) < 1e-12);
    }
}

TEST_CASE("demodulated noise has covariance N0 C") {
    const int n = 12;
    const double alpha = 0.8, n0 = 0.5;
    const auto cm = carrier_matrix(n, alpha);
    const auto c = correlation_matrix(n, alpha);
    Philox rng(13, 0);

    const int draws = 20000;
    CMat cov(n, n);
    std::vector<cplx> w(n);
    for (int d = 0; d < draws; ++d) {
        for (auto& v : w) v = rng.next_cnoise(n0);
        const auto r = demodulate(cm, w);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) cov(i, j) += r[i] * std::conj(r[j]);
    }
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            worst = std::max(worst, std::abs(cov(i, j) / (double(draws) * n0) - c.c(i, j)));
    CHECK(worst < 0.05);
}

TEST_CASE("subblock view extracts the diagonal block") {
    const auto c = correlation_matrix(12, 0.67);
    const auto b = c.subblock(2, 4);
    for (int r = 0; r < 4; ++r)
        for (int k = 0; k < 4; ++k) CHECK(b(r, k) == c.c(8 + r, 8 + k));
}

TEST_CASE("alpha outside (0,1] is rejected") {
    CHECK_THROWS_AS(carrier_matrix(12, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(carrier_matrix(12, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(carrier_matrix(12, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(correlation_matrix(12, 1.0001), std::invalid_argument);
}
