#pragma once
#include "landau/fft.hpp"
#include "landau/grid.hpp"

#include <array>
#include <vector>

namespace landau {

// Coulomb kernel a(z) = |z|^{-1} (Id - zhat zhat^T); component order
// xx,yy,zz,xy,xz,yz everywhere a symmetric matrix is flattened.
double kernel_a(int comp, double zx, double zy, double zz);

// Convolution machinery for a*f and b*f.
//
// Two representations are kept side by side:
//  - analytic multipliers on the main grid (A_sym real, B_sym imaginary part)
//    with the free-space values 8*pi*xi_i*xi_j/|xi|^4 and 8*pi*xi_i/|xi|^2 at
//    xi != 0 and a quadrature box average at the zero mode.  These satisfy the
//    divergence and trace identities exactly and serve as the reference
//    symbols.
//  - sampled-kernel tables on the doubled (zero-padding) box: the kernel is
//    sampled on the [-2L,2L)^3 lattice with the z=0 node dropped and
//    transformed once; convolving through these tables reproduces the direct
//    lattice quadrature sum_{w} a(v-w) f(w) h^3 to rounding, which is what
//    every oracle below measures against.  This is the production path.
struct CoulombSymbols {
    VelocityGrid grid;
    BoxShape pad;  // (2n)^3 box

    std::array<std::vector<double>, 6> A_sym;     // main half-spectrum, real
    std::array<std::vector<double>, 3> B_sym_im;  // main half-spectrum, imag part
    std::array<double, 6> zero_mode_a{};
    std::array<double, 3> zero_mode_b{};

    std::array<std::vector<double>, 6> A_pad;     // padded tables, real
};

CoulombSymbols build_symbols(const VelocityGrid& grid);

// Shell-truncated kernels a_k(z) = a(z) phi(2^{-k} z), k >= 0, and
// a_{-1}(z) = a(z) psi(z), stored as padded tables like A_pad.  b_k and c_k
// multipliers are the spectral divergence and double divergence of a_k.
struct TruncatedKernelBank {
    VelocityGrid grid;
    BoxShape pad;
    int k_min = -1;
    int k_max = 0;
    // index [k - k_min]
    std::vector<std::array<std::vector<double>, 6>> A_k;

    bool in_range(int k) const { return k >= k_min && k <= k_max; }
};

// bank covers shells -1..k_max; k_max defaults to the first shell whose
// support clears the doubled box diameter (so the last entry is a zero table)
TruncatedKernelBank build_kernel_bank(const VelocityGrid& grid, int k_max = -1);

// kernel shell values a_k(comp, z); used by the bank and by direct oracles
double kernel_a_shell(int k, int comp, double zx, double zy, double zz);

} // namespace landau
