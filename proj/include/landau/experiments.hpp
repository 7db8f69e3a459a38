#pragma once
#include "landau/integrator.hpp"

#include <string>
#include <vector>

namespace landau {

// ---- initial data -------------------------------------------------------

// two counter-propagating Maxwellians at +-sep e_x, mass rho split evenly
ScalarField make_bimodal(const VelocityGrid& g, double rho = 1.0,
                         double sep = 1.2, double T = 0.7);

// real field synthesized in Fourier space with |f_hat| ~ <xi>^{-(3/2+r+delta)}
// above a soft low cutoff, uniform random phases; may take negative values
// (linear-model paths)
ScalarField make_rough_fourier(const VelocityGrid& g, double r, std::uint64_t seed,
                               double delta = 0.02, double xi_lo = 0.0);

// nonnegative variant for collision runs: the rough texture is squashed
// through tanh and carried multiplicatively on a smooth plateau bulk, then
// scaled to a target mass; vanishes only where the bulk taper reaches zero
ScalarField make_rough_fourier_nonneg(const VelocityGrid& g, double r,
                                      std::uint64_t seed, double mass,
                                      double delta = 0.05, double xi_lo = 4.5);

// random separated Gaussian mixtures (diagnostic corpora): component centers
// follow a fixed well-separated pattern jittered by the seed, temperatures in
// [1.8, 2.8] so every component is resolved at n = 16
ScalarField make_separated_mixture(const VelocityGrid& g, std::uint64_t seed);

// sum of compact bumps at |x_j| = (3/2) 8^j, j = 0..J, under weight <v>^-l
struct RoughDataSpec {
    int J = 5;
    double l = 1.0;
    double eps = 0.85;
    double bump_width = 0.325;
};

struct RoughDataResult {
    ScalarField f;
    std::vector<double> S;       // partial sums S_0..S_J
    std::vector<double> ratios;  // S_J / S_{J-1}
};

RoughDataResult rough_data(const RoughDataSpec& spec, const VelocityGrid& g);

// ---- rate fits ----------------------------------------------------------

struct RateFit {
    NormSpec spec;
    double t0 = 0.0, t1 = 0.0;
    double slope = 0.0;
    double stderr_ = 0.0;
    double theoretical = 0.0;
    double tolerance = 0.3;
    int samples = 0;
    bool pass = false;
};

// log-log OLS; first two samples dropped (scheme transient convention)
RateFit fit_rate(const std::vector<double>& ts, const std::vector<double>& vals,
                 double t0, double t1, double theoretical, double tolerance,
                 const NormSpec& spec);

// closed-form heat path: || e^{t Laplace} f0 ||_{H^n} sampled geometrically in
// the window straight from the multiplier, no stepping
RateFit heat_smoothing_rate(const ScalarField& f0, double sobolev_n, double r,
                            double t0, double t1, int samples = 14);

struct HeatRefinementLevel {
    int n_grid;
    double t0, t1;
};
// defaults: (64, [.02,.2]), (96, [.009,.09]), (128, [.004,.04])
std::vector<RateFit> heat_refinement_study(double sobolev_n, double r,
                                           double L, std::uint64_t seed,
                                           const std::vector<HeatRefinementLevel>& levels = {});

// landau solver path at fixed grid; data from make_rough_fourier_nonneg
struct LandauRateConfig {
    int n_grid = 48;
    double L = 4.0;
    double mass = 0.35;
    double t0 = 0.02, t1 = 0.3;
    double t_end = 0.32;
    double dt_cap = 0.01;
    double weight_l = 1.0;  // data class L^2_l; measured norm H^1_{l-3/2}
    std::uint64_t seed = 0;
};
RateFit landau_smoothing_rate(const LandauRateConfig& cfg);

// ---- weight-index dichotomy (1D toy model) ------------------------------

struct WeightScanRow {
    double w;
    bool predicted_bounded;
    double sup_ratio;        // sup over window / initial value
    bool growing;            // monotone increase across the last 5 stamps
    std::vector<double> series;
};

struct WeightScanResult {
    std::vector<double> ts;
    std::vector<WeightScanRow> rows;
};

// runs the 1D toy model from translate data and tabulates both predicted
// columns: w_bounded = l - 3n/2 + 3r/2 and w_growing = l - (n - eps)/3
WeightScanResult weight_index_scan(double sobolev_n, double l, double r,
                                   double eps, double t_end, int n_grid,
                                   double L, int J);

// ---- moment propagation / relaxation ------------------------------------

struct MomentPropagationResult {
    std::vector<double> ts;
    std::vector<double> values;
    double initial = 0.0;
    double max_ratio = 0.0;  // max over t of value / (initial (1 + t))
    bool pass = false;       // max value <= 3 initial (1+t)
    double b_estimate = 0.0; // measured tail exponent of f0
};

// f0 must carry an exponential tail: b is estimated from the data and the
// run refuses (invalid_argument) unless a < b/2
MomentPropagationResult moment_propagation(const CoulombSymbols& sym,
                                           const ScalarField& f0, double a,
                                           double beta, double t_end,
                                           const SchemeConfig& cfg);

struct RelaxationResult {
    std::vector<double> ts;
    std::vector<double> rel_entropy;    // H(f(t)|mu)
    std::vector<double> l2_distance;    // ||f - mu||_2 / ||mu||_2
    double final_distance = 0.0;
    bool entropy_monotone = false;
    double mass_drift = 0.0, momentum_drift = 0.0, energy_drift = 0.0;
};

RelaxationResult relaxation(const CoulombSymbols& sym, const ScalarField& f0,
                            double t_end, const SchemeConfig& cfg);

} // namespace landau
