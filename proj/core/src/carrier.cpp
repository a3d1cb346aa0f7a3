#include "sefdm/carrier.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sefdm {

CMat herm(const CMat& m) {
    CMat out(m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) out(c, r) = std::conj(m(r, c));
    return out;
}

CMat mat_mul(const CMat& a, const CMat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    CMat out(a.rows, b.cols);
    for (int r = 0; r < a.rows; ++r) {
        for (int k = 0; k < a.cols; ++k) {
            const cplx v = a(r, k);
            if (v == cplx{}) continue;
            for (int c = 0; c < b.cols; ++c) out(r, c) += v * b(k, c);
        }
    }
    return out;
}

std::vector<cplx> mat_vec(const CMat& m, std::span<const cplx> v) {
    if (m.cols != static_cast<int>(v.size())) throw std::invalid_argument("mat_vec: shape mismatch");
    std::vector<cplx> out(static_cast<std::size_t>(m.rows));
    for (int r = 0; r < m.rows; ++r) {
        cplx acc{};
        for (int c = 0; c < m.cols; ++c) acc += m(r, c) * v[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

CMat sub_block(const CMat& m, int r0, int c0, int rows, int cols) {
    if (r0 + rows > m.rows || c0 + cols > m.cols)
        throw std::invalid_argument("sub_block: out of range");
    CMat out(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out(r, c) = m(r0 + r, c0 + c);
    return out;
}

CarrierMatrix carrier_matrix(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("carrier_matrix: N must be >= 1");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("carrier_matrix: alpha must lie in (0, 1], got " +
                                    std::to_string(alpha));
    CarrierMatrix cm;
    cm.n = n;
    cm.alpha = alpha;
    cm.phi = CMat(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int t = 0; t < n; ++t) {
        for (int k = 0; k < n; ++k) {
            const double ang = 2.0 * M_PI * alpha * static_cast<double>(t) * k / n;
            cm.phi(t, k) = norm * cplx{std::cos(ang), std::sin(ang)};
        }
    }
    return cm;
}

std::vector<cplx> modulate(const CarrierMatrix& cm, std::span<const cplx> s) {
    return mat_vec(cm.phi, s);
}

std::vector<cplx> demodulate(const CarrierMatrix& cm, std::span<const cplx> y) {
    if (cm.n != static_cast<int>(y.size())) throw std::invalid_argument("demodulate: length mismatch");
    std::vector<cplx> out(static_cast<std::size_t>(cm.n));
    for (int k = 0; k < cm.n; ++k) {
        cplx acc{};
        for (int t = 0; t < cm.n; ++t) acc += std::conj(cm.phi(t, k)) * y[static_cast<std::size_t>(t)];
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

CorrelationMatrix correlation_matrix(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("correlation_matrix: N must be >= 1");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("correlation_matrix: alpha must lie in (0, 1]");

    CorrelationMatrix out;
    out.n = n;
    out.alpha = alpha;
    out.c = CMat(n, n);

    for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m) {
            if (k == m) {
                out.c(k, m) = 1.0;
                continue;
            }
            const double d = static_cast<double>(m - k);
            const double th = 2.0 * M_PI * alpha * d;
            const cplx num = 1.0 - cplx{std::cos(th), std::sin(th)};
            const cplx den = 1.0 - cplx{std::cos(th / n), std::sin(th / n)};
            if (std::abs(den) > 1e-9) {
                out.c(k, m) = num / den / static_cast<double>(n);
            } else {
                // Removable singularity: sum the geometric series directly.
                cplx acc{};
                for (int t = 0; t < n; ++t) {
                    const double a = th * t / n;
                    acc += cplx{std::cos(a), std::sin(a)};
                }
                out.c(k, m) = acc / static_cast<double>(n);
            }
        }
    }
    return out;
}

}  // namespace sefdm
