#pragma once
#include "landau/fft.hpp"
#include "landau/grid.hpp"

#include <vector>

namespace landau {

// Radial partition of unity: psi == 1 on [0,1], falls to 0 by 4/3 through a
// C^inf exponential glue; phi(r) = psi(r/2) - psi(r) is supported in
// [3/4, 8/3] and == 1 on the plateau [4/3, 2].  The telescoping
// psi(r) + sum_{j>=0} phi(2^-j r) = psi(2^-(J+1) r) is exact by construction.
struct DyadicPartition {
    double sharpness = 0.05;  // glue parameter lambda in exp(-l/s - l/(1-s))
    std::vector<double> table;  // cumulative glue integral on [0,1], trapezoid

    double psi(double r) const;
    double phi(double r) const { return psi(0.5 * r) - psi(r); }
    // phi == 1 on [4/3, 2]; symmetric constant about 3/2 is c = 1/6
    double plateau_c() const { return 1.0 / 6.0; }
};

DyadicPartition build_partition(double sharpness = 0.05);

// smallest N with phi(2^-j .) phi(2^-k .) == 0 whenever |j-k| >= N, computed
// from the constructed support bounds
int overlap_constant(const DyadicPartition& part);

// Cached dyadic projector multipliers for a grid: frequency shells F_j
// (Fourier multiplier phi(2^-j |xi|)) and phase shells P_k (pointwise mask
// phi(2^-k |v|)), j,k = -1 mapping to the psi profile.
struct ProjectorBank {
    VelocityGrid grid;
    DyadicPartition part;
    int j_max = 0;  // last frequency shell whose support meets the grid ball
    int k_max = 0;  // last phase shell whose support meets the spatial box
    std::vector<std::vector<double>> freq_mult;  // [j + 1] half-spectrum multiplier
    std::vector<std::vector<double>> phase_mask; // [k + 1] real-space mask
};

ProjectorBank build_projectors(const VelocityGrid& grid,
                               const DyadicPartition& part);

ScalarField project_freq(const ProjectorBank& bank, int j, const ScalarField& f);
SpectralField project_freq(const ProjectorBank& bank, int j, const SpectralField& F);
ScalarField project_phase(const ProjectorBank& bank, int k, const ScalarField& f);

// || grad F_j f ||_2 / (2^j || F_j f ||_2) and its low-side companion
struct BernsteinRatios {
    double ratio_high;
    double ratio_low;
};
BernsteinRatios bernstein_check(const ProjectorBank& bank, int j, const ScalarField& f);

} // namespace landau
