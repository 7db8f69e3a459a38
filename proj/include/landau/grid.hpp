#pragma once
#include <cstddef>
#include <cstdint>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace landau {

// Periodic velocity box [-L, L)^dim, uniform lattice, wavenumbers xi_k = pi*k/L.
struct VelocityGrid {
    int dim = 3;       // 1 or 3
    int n = 32;        // nodes per axis: even, >= 8, 2-3-smooth (48/96 allowed)
    double L = 8.0;    // half width
    double h = 0.5;    // 2L/n

    VelocityGrid() = default;
    VelocityGrid(int dim_, int n_, double L_);

    std::size_t size() const;        // n^dim real nodes
    std::size_t spec_size() const;   // real-transform layout size
    int nz_half() const { return n / 2 + 1; }

    double node(int i) const { return -L + h * i; }
    // unsigned index 0..n-1 -> signed wavenumber index
    int ksigned(int k) const { return k <= n / 2 ? k : k - n; }
    double xi(int k) const { return M_PI * ksigned(k) / L; }
    // derivative wavenumber: Nyquist plane zeroed so odd multipliers stay conjugate-symmetric
    double xid(int k) const { return (2 * k == n) ? 0.0 : xi(k); }
    double xi_max() const { return M_PI / h; }

    bool operator==(const VelocityGrid& o) const {
        return dim == o.dim && n == o.n && L == o.L;
    }
};

struct ScalarField {
    VelocityGrid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const VelocityGrid& g) : grid(g), v(g.size(), 0.0) {}
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
    std::size_t size() const { return v.size(); }
};

struct SpectralField {
    VelocityGrid grid;
    std::vector<std::complex<double>> c;

    SpectralField() = default;
    explicit SpectralField(const VelocityGrid& g) : grid(g), c(g.spec_size(), 0.0) {}
};

// symmetric tensor field: 6 components xx,yy,zz,xy,xz,yz in 3D, 1 component in 1D
struct TensorField {
    VelocityGrid grid;
    std::vector<std::vector<double>> comp;

    TensorField() = default;
    explicit TensorField(const VelocityGrid& g)
        : grid(g), comp(g.dim == 3 ? 6 : 1, std::vector<double>(g.size(), 0.0)) {}
};

// global knobs: thread count for kernels/FFT, ordered reductions for bit-stable output
void set_threads(int nthreads);
int threads();
void set_deterministic(bool on);
bool deterministic();

double integrate(const ScalarField& f);                      // h^dim * sum
double integrate_weighted(const ScalarField& f, const ScalarField& w);
double norm_l2(const ScalarField& f);                        // sqrt(h^dim * sum f^2)
ScalarField weight_field(const VelocityGrid& g, double l);   // <v>^l nodal samples

// node coordinate along axis 'a' as a flat field (3D) or the 1D coordinate
ScalarField coordinate_field(const VelocityGrid& g, int axis);

std::string grid_describe(const VelocityGrid& g);

} // namespace landau
