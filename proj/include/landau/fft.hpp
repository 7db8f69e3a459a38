#pragma once
#include "landau/grid.hpp"

namespace landau {

// Real-to-complex transforms with the raw-DFT convention: forward carries no
// normalisation, inverse divides by n^dim.  Layout is row-major with the last
// axis halved (n/2+1 complex entries); in 1D the layout is just n/2+1.
// Plans are cached per shape and reused; FFTW_ESTIMATE keeps planning
// deterministic across runs.

SpectralField forward(const ScalarField& f);
ScalarField inverse(const SpectralField& F);

// transforms on bare buffers of an arbitrary box shape (used by the padded
// kernel convolutions, where the box is 2n per axis)
struct BoxShape {
    int dim;
    int n;                 // per-axis size
    std::size_t real_size() const;
    std::size_t spec_size() const;
};
void forward_box(const BoxShape& s, const double* in, std::complex<double>* out);
void inverse_box(const BoxShape& s, const std::complex<double>* in, double* out);

// d/dv_axis via i*xi multiplier with the Nyquist plane zeroed
SpectralField spectral_derivative(const SpectralField& F, int axis);
ScalarField derivative(const ScalarField& f, int axis);

// sum over the full (unfolded) spectrum of |F_k|^2 * g(|xi|^2), honouring the
// half-layout double counting; g = 1 recovers n^dim/h^dim * ||f||_L2^2
double spectral_sum_abs2(const SpectralField& F);

// multiply spectrum in place by a radial function of |xi|^2
template <class Fn>
void apply_radial_multiplier(SpectralField& F, Fn&& fn);

// iterate over the half-spectrum: cb(flat_index, xi_x, xi_y, xi_z, weight)
// where weight is 2 for entries whose mirror is not stored, else 1
template <class Fn>
void for_each_mode(const VelocityGrid& g, Fn&& cb) {
    if (g.dim == 1) {
        const int nh = g.nz_half();
        for (int k = 0; k < nh; ++k) {
            double w = (k == 0 || 2 * k == g.n) ? 1.0 : 2.0;
            cb(static_cast<std::size_t>(k), g.xi(k), 0.0, 0.0, w);
        }
        return;
    }
    const int n = g.n, nh = g.nz_half();
    std::size_t idx = 0;
    for (int kx = 0; kx < n; ++kx) {
        const double xx = g.xi(kx);
        for (int ky = 0; ky < n; ++ky) {
            const double yy = g.xi(ky);
            for (int kz = 0; kz < nh; ++kz, ++idx) {
                double w = (kz == 0 || 2 * kz == n) ? 1.0 : 2.0;
                cb(idx, xx, yy, g.xi(kz), w);
            }
        }
    }
}

template <class Fn>
void apply_radial_multiplier(SpectralField& F, Fn&& fn) {
    for_each_mode(F.grid, [&](std::size_t i, double x, double y, double z, double) {
        F.c[i] *= fn(x * x + y * y + z * z);
    });
}

} // namespace landau
