#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sefdm/constellation.hpp"

namespace sefdm {

// Minimal dense complex matrix, row-major. Everything here is N <= 64, so
// plain O(N^2)/O(N^3) loops are used throughout; the closed-form/product
// identity tests are the regression anchor.
struct CMat {
    int rows = 0, cols = 0;
    std::vector<cplx> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const cplx& operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

CMat herm(const CMat& m);                       // conjugate transpose
CMat mat_mul(const CMat& a, const CMat& b);
std::vector<cplx> mat_vec(const CMat& m, std::span<const cplx> v);
CMat sub_block(const CMat& m, int r0, int c0, int rows, int cols);

// N x N bank of non-orthogonal subcarriers: phi(t, k) = exp(j 2 pi a t k / N) / sqrt(N)
// with t, k = 0..N-1. At a = 1 this is the unitary inverse-DFT matrix.
struct CarrierMatrix {
    int n = 0;
    double alpha = 1.0;
    CMat phi;
};

// alpha must lie in (0, 1]; alpha > 1 is sub-orthogonal and rejected.
CarrierMatrix carrier_matrix(int n, double alpha);

// X = phi * S  (time samples from subcarrier amplitudes)
std::vector<cplx> modulate(const CarrierMatrix& cm, std::span<const cplx> s);

// R = phi^H * Y (matched-filter bank); noise-free identity R = C * S.
std::vector<cplx> demodulate(const CarrierMatrix& cm, std::span<const cplx> y);

// Subcarrier correlation matrix C = phi^H * phi, evaluated in closed form as
// a geometric sum: C(k,n) = 1 on the diagonal and
//   (1/N) * (1 - exp(j 2 pi a d)) / (1 - exp(j 2 pi a d / N)),  d = n - k,
// off it. When the denominator is (numerically) zero the column inner
// product is computed directly instead; that only happens when a*d/N is an
// integer, where the expression has a removable singularity.
struct CorrelationMatrix {
    int n = 0;
    double alpha = 1.0;
    CMat c;

    // g-th K x K diagonal block (the per-subblock view used by the detector).
    CMat subblock(int g, int k) const { return sub_block(c, g * k, g * k, k, k); }
};

CorrelationMatrix correlation_matrix(int n, double alpha);

}  // namespace sefdm
