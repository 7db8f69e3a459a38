#pragma once
#include "landau/partition.hpp"

namespace landau {

// weighted Sobolev norm || <D>^m log^s(2 + <D>) <v>^l f ||_2 : weight first
// (pointwise), multiplier second (spectral)
struct NormSpec {
    double m = 0.0;
    double s = 0.0;
    double l = 0.0;
};

struct NormResult {
    double value = 0.0;
    bool truncated = false;  // top resolvable shell carries > 1% of the sum
};

NormResult norm_hmsl_direct(const NormSpec& spec, const ScalarField& f);

// per-shell weights of the dyadic sum: the defining multiplier evaluated at
// the shell plateau centre 3/2 * 2^idx (1 for the idx = -1 low block), i.e.
// (1 + 9/4 4^j)^m (2+j)^{2s} for frequency shells and (1 + 9/4 4^k)^l for
// velocity blocks.  Proportional to the raw dyadic powers 2^{2jm} 2^{2kl} up
// to a bounded factor, so equivalence constants are unchanged, but ratios
// against the direct norm centre near 1 instead of carrying a 2^{2|m|+2|l|}
// edge bias.
double dyadic_freq_weight(const NormSpec& spec, int j);
double dyadic_phase_weight(const NormSpec& spec, int k);

// dyadic equivalent of the direct norm:
// sum_{j,k >= -1} freq_weight(j) phase_weight(k) ||F_j P_k f||^2
NormResult norm_hmsl_dyadic(const ProjectorBank& bank, const NormSpec& spec,
                            const ScalarField& f);

// shell index maximising freq_weight(j) ||F_j f||^2 (scale-invariant)
int argmax_shell(const ProjectorBank& bank, const NormSpec& spec,
                 const ScalarField& f);

} // namespace landau
