#include "landau/symbols.hpp"

#include "landau/ops.hpp"
#include "landau/partition.hpp"

#include <cmath>

namespace landau {

namespace {
constexpr double kEightPi = 8.0 * M_PI;

const DyadicPartition& default_partition() {
    static const DyadicPartition p = build_partition();
    return p;
}

// padded-lattice displacement coordinate for index i in [0, 2n)
inline double pad_coord(int i, int m, double h) {
    int s = i <= m / 2 ? i : i - m;
    return h * s;
}
} // namespace

double kernel_a(int comp, double zx, double zy, double zz) {
    double r2 = zx * zx + zy * zy + zz * zz;
    if (r2 == 0.0) return 0.0;
    double r = std::sqrt(r2);
    double zi, zj;
    double delta;
    switch (comp) {
        case 0: zi = zx; zj = zx; delta = 1.0; break;
        case 1: zi = zy; zj = zy; delta = 1.0; break;
        case 2: zi = zz; zj = zz; delta = 1.0; break;
        case 3: zi = zx; zj = zy; delta = 0.0; break;
        case 4: zi = zx; zj = zz; delta = 0.0; break;
        default: zi = zy; zj = zz; delta = 0.0; break;
    }
    return delta / r - zi * zj / (r2 * r);
}

double kernel_a_shell(int k, int comp, double zx, double zy, double zz) {
    double r = std::sqrt(zx * zx + zy * zy + zz * zz);
    const DyadicPartition& p = default_partition();
    double cut = k < 0 ? p.psi(r) : p.phi(std::ldexp(r, -k));
    return cut == 0.0 ? 0.0 : cut * kernel_a(comp, zx, zy, zz);
}

namespace {
// sample a kernel on the padded lattice and transform; table = rfft * h^3
template <class Kernel>
void build_pad_table(const VelocityGrid& g, const BoxShape& pad, Kernel&& ker,
                     int comp, std::vector<double>& out) {
    const int m = pad.n;
    std::vector<double> samples(pad.real_size());
    std::size_t idx = 0;
    for (int i = 0; i < m; ++i) {
        double zx = pad_coord(i, m, g.h);
        for (int j = 0; j < m; ++j) {
            double zy = pad_coord(j, m, g.h);
            for (int k = 0; k < m; ++k, ++idx)
                samples[idx] = ker(comp, zx, zy, pad_coord(k, m, g.h));
        }
    }
    std::vector<std::complex<double>> spec(pad.spec_size());
    forward_box(pad, samples.data(), spec.data());
    const double h3 = g.h * g.h * g.h;
    out.resize(pad.spec_size());
    // even kernel -> real transform; imaginary part is rounding noise
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = spec[i].real() * h3;
}
} // namespace

CoulombSymbols build_symbols(const VelocityGrid& grid) {
    if (grid.dim != 3)
        throw std::invalid_argument("collision symbols need dim 3");
    CoulombSymbols sym;
    sym.grid = grid;
    sym.pad = BoxShape{3, 2 * grid.n};

    // analytic multipliers on the main grid
    for (int c = 0; c < 6; ++c) sym.A_sym[c].assign(grid.spec_size(), 0.0);
    for (int c = 0; c < 3; ++c) sym.B_sym_im[c].assign(grid.spec_size(), 0.0);
    for_each_mode(grid, [&](std::size_t i, double x, double y, double z, double) {
        double q2 = x * x + y * y + z * z;
        if (q2 == 0.0) return;
        const double xi[3] = {x, y, z};
        static const int ii[6] = {0, 1, 2, 0, 0, 1};
        static const int jj[6] = {0, 1, 2, 1, 2, 2};
        for (int c = 0; c < 6; ++c)
            sym.A_sym[c][i] = kEightPi * xi[ii[c]] * xi[jj[c]] / (q2 * q2);
        for (int c = 0; c < 3; ++c)
            sym.B_sym_im[c][i] = kEightPi * xi[c] / q2;
    });
    // zero mode: box average of the truncated kernel (z = 0 node excluded,
    // which is the h/2 ball at this resolution)
    {
        const double h3 = grid.h * grid.h * grid.h;
        for (int c = 0; c < 6; ++c) {
            double acc = 0.0;
            for (int i = 0; i < grid.n; ++i)
                for (int j = 0; j < grid.n; ++j)
                    for (int k = 0; k < grid.n; ++k)
                        acc += kernel_a(c, grid.node(i), grid.node(j), grid.node(k));
            sym.zero_mode_a[c] = h3 * acc;
            sym.A_sym[c][0] = sym.zero_mode_a[c];
        }
        // b is odd: zero mode vanishes
        sym.zero_mode_b = {0.0, 0.0, 0.0};
    }

    // padded sampled-kernel tables (production convolution path)
    for (int c = 0; c < 6; ++c)
        build_pad_table(grid, sym.pad, kernel_a, c, sym.A_pad[c]);
    return sym;
}

TruncatedKernelBank build_kernel_bank(const VelocityGrid& grid, int k_max) {
    if (grid.dim != 3)
        throw std::invalid_argument("kernel bank needs dim 3");
    TruncatedKernelBank bank;
    bank.grid = grid;
    bank.pad = BoxShape{3, 2 * grid.n};
    if (k_max < 0) {
        // first shell whose support clears the padded-lattice diameter
        double diam = std::sqrt(3.0) * 2.0 * grid.L;
        k_max = 0;
        while (std::ldexp(1.0, k_max) <= diam) ++k_max;
    }
    bank.k_min = -1;
    bank.k_max = k_max;
    bank.A_k.resize(k_max + 2);
    for (int k = -1; k <= k_max; ++k) {
        auto ker = [k](int comp, double zx, double zy, double zz) {
            return kernel_a_shell(k, comp, zx, zy, zz);
        };
        for (int c = 0; c < 6; ++c)
            build_pad_table(grid, bank.pad, ker, c, bank.A_k[k + 1][c]);
    }
    return bank;
}

} // namespace landau
