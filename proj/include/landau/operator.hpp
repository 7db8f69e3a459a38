#pragma once
#include "landau/symbols.hpp"

#include <array>

namespace landau {

// a*f through the padded sampled-kernel tables; equals the direct lattice
// quadrature with the z=0 node skipped, up to rounding
TensorField conv_a(const CoulombSymbols& sym, const ScalarField& f);

// b*f realised as sum_j a_ij * (d_j f) with the main-grid spectral gradient
// zero-padded like any field, so the weak-form double sum matches the flux
// term for term; the kernel identity b_i = sum_j d_j a_ij itself is checked
// on the analytic symbols
std::array<ScalarField, 3> conv_b(const CoulombSymbols& sym, const ScalarField& f);

// conservative form  Q = div( [a*f] grad f - [b*f] f ); integrates to zero
// exactly (spectral divergence has no zero mode)
ScalarField q_conservative(const CoulombSymbols& sym, const ScalarField& f);

// non-conservative form  Q = sum_ij (a_ij*f) d_ij f + 8 pi f^2
ScalarField q_nonconservative(const CoulombSymbols& sym, const ScalarField& f);

// shell-truncated conservative form with kernel a_k
ScalarField q_truncated(const CoulombSymbols& sym, const TruncatedKernelBank& bank,
                        int k, const ScalarField& g, const ScalarField& h);

// brute-force O(N^6) reference convolution (n <= 16 guarded)
TensorField conv_a_direct(const ScalarField& f);
TensorField conv_a_direct_shell(const TruncatedKernelBank& bank, int k,
                                const ScalarField& f);

// weak-form double sum
//   -1/2 h^{2 dim} sum_{v != w} a(v-w) . {grad f/f(v) - grad f/f(w)}
//                                x {grad phi(v) - grad phi(w)} f(v) f(w)
// grad f is spectral, f floored at 1e-30 max; grad phi may be supplied
// analytically (polynomial test functions) or is taken spectrally when null
double weak_form_oracle(const ScalarField& f, const ScalarField& phi,
                        const std::array<ScalarField, 3>* grad_phi = nullptr);

// grid pairing <q_conservative(f), phi> evaluated as -<flux, grad phi> so the
// double-sum identity is term-for-term; grad phi spectral
double weak_form_grid(const CoulombSymbols& sym, const ScalarField& f,
                      const ScalarField& phi);

struct CoercivityResult {
    double lhs;         // int (a*g) : grad F x grad F
    double rhs_grad;    // || grad F ||^2 weighted <v>^-3
    double rhs_sphere;  // || v x grad F ||^2 weighted <v>^-3
};
CoercivityResult coercivity_probe(const CoulombSymbols& sym, const ScalarField& g,
                                  const ScalarField& F);

// serial reference toggle: when set, the pointwise assembly kernels run the
// plain single-thread loops instead of the OpenMP versions (see bench target)
void set_serial_reference(bool on);
bool serial_reference();

} // namespace landau
