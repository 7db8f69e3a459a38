#pragma once
#include <complex>
#include <cstddef>

// Hot elementwise kernels behind the operator evaluations.  Each has an
// OpenMP-parallel implementation (ops_parallel.cpp) and a plain serial one
// (ops_serial.cpp) selected at runtime; both orders of operation are
// identical elementwise, so the two paths must agree bitwise -- the serial
// path is the reference the tests and the bench target compare against.

namespace landau::ops {

using cplx = std::complex<double>;

// zero-pad an n^3 field into the m^3 buffer (m = 2n), rest cleared
void pad3(const double* f, int n, double* out, int m);
// crop the n^3 corner back out of the m^3 buffer
void crop3(const double* in, int m, double* out, int n);

// out[i] = table[i] * F[i]  (real table times complex spectrum)
void spec_mul(const double* table, const cplx* F, cplx* out, std::size_t len);
// out[i] += table[i] * F[i]
void spec_mul_add(const double* table, const cplx* F, cplx* out, std::size_t len);
// out[i] = i * xi_axis(i) * F[i] on the m^3 half-spectrum of a box with
// period 4L (padding box); Nyquist plane zeroed
void spec_derivative3(const cplx* F, cplx* out, int m, double box_half_width,
                      int axis);

// flux[i] = axx*gx + axy*gy + axz*gz - b*x style accumulations
void flux_assemble(const double* a0, const double* a1, const double* a2,
                   const double* g0, const double* g1, const double* g2,
                   const double* b, const double* f, double* out,
                   std::size_t len);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t len);
// out[i] = a[i] * b[i]
void hadamard(const double* a, const double* b, double* out, std::size_t len);

} // namespace landau::ops

namespace landau::ops::serial {
void pad3(const double* f, int n, double* out, int m);
void crop3(const double* in, int m, double* out, int n);
void spec_mul(const double* table, const cplx* F, cplx* out, std::size_t len);
void spec_mul_add(const double* table, const cplx* F, cplx* out, std::size_t len);
void spec_derivative3(const cplx* F, cplx* out, int m, double box_half_width,
                      int axis);
void flux_assemble(const double* a0, const double* a1, const double* a2,
                   const double* g0, const double* g1, const double* g2,
                   const double* b, const double* f, double* out,
                   std::size_t len);
void axpy(double alpha, const double* x, double* y, std::size_t len);
void hadamard(const double* a, const double* b, double* out, std::size_t len);
} // namespace landau::ops::serial
