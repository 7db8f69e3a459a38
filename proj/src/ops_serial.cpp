#include "landau/ops.hpp"

#include <cmath>
#include <cstring>

// Reference kernels: straightforward loops, no pragmas.  Keep these dumb.

namespace landau::ops::serial {

void pad3(const double* f, int n, double* out, int m) {
    std::memset(out, 0, sizeof(double) * static_cast<std::size_t>(m) * m * m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double* src = f + (static_cast<std::size_t>(i) * n + j) * n;
            double* dst = out + (static_cast<std::size_t>(i) * m + j) * m;
            std::memcpy(dst, src, sizeof(double) * n);
        }
}

void crop3(const double* in, int m, double* out, int n) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double* src = in + (static_cast<std::size_t>(i) * m + j) * m;
            double* dst = out + (static_cast<std::size_t>(i) * n + j) * n;
            std::memcpy(dst, src, sizeof(double) * n);
        }
}

void spec_mul(const double* table, const cplx* F, cplx* out, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) out[i] = table[i] * F[i];
}

void spec_mul_add(const double* table, const cplx* F, cplx* out, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) out[i] += table[i] * F[i];
}

void spec_derivative3(const cplx* F, cplx* out, int m, double box_half_width,
                      int axis) {
    const int nh = m / 2 + 1;
    const double base = M_PI / box_half_width;
    std::size_t idx = 0;
    for (int kx = 0; kx < m; ++kx)
        for (int ky = 0; ky < m; ++ky)
            for (int kz = 0; kz < nh; ++kz, ++idx) {
                int k = axis == 0 ? kx : axis == 1 ? ky : kz;
                int ks = k <= m / 2 ? k : k - m;
                double xi = (2 * k == m) ? 0.0 : base * ks;
                out[idx] = cplx(0.0, xi) * F[idx];
            }
}

void flux_assemble(const double* a0, const double* a1, const double* a2,
                   const double* g0, const double* g1, const double* g2,
                   const double* b, const double* f, double* out,
                   std::size_t len) {
    for (std::size_t i = 0; i < len; ++i)
        out[i] = a0[i] * g0[i] + a1[i] * g1[i] + a2[i] * g2[i] - b[i] * f[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

void hadamard(const double* a, const double* b, double* out, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) out[i] = a[i] * b[i];
}

} // namespace landau::ops::serial
