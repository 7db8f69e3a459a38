#pragma once
#include "landau/grid.hpp"
#include "landau/norms.hpp"

#include <array>
#include <string>
#include <vector>

namespace landau {

struct FluidMoments {
    double rho = 0.0;
    std::array<double, 3> u{};
    double T = 0.0;
    double energy = 0.0;  // int |v|^2/2 f
};

FluidMoments moments(const ScalarField& f);
ScalarField maxwellian(const VelocityGrid& g, double rho,
                       const std::array<double, 3>& u, double T);

// int ( f log(f/mu) - f + mu ), integrand -> mu where f = 0
double relative_entropy(const ScalarField& f, const ScalarField& mu);
// int f log f with 0 log 0 = 0
double entropy(const ScalarField& f);

// entropy dissipation double sum (quadratic cost, n <= 16 enforced):
//   1/2 h^{2 dim} sum_{v != w} a(v-w) . {grad f/f(v) - grad f/f(w)}^x2 f f*
// floor_rel floors f relative to its max before dividing; the default is set
// where spectral ringing of resolved fields lives, far above rounding but far
// below tail values that carry real signal
double dissipation(const ScalarField& f, double floor_rel = 1e-4);

// Fisher information int |grad f|^2 / (4 f), f floored at 1e-30 max
double fisher(const ScalarField& f);

struct ExpMomentSpec {
    double a = 0.2;
    double beta = 1.0;
    int M = 0;
    int max_terms = 500;
};

// || f G ||_2 with G^2(v) = sum_{l >= M} a^{2l/beta} <v>^{2l} / (l!)^{2/beta},
// terms in log space, summation stops below 1e-16 of the partial sum
double exp_moment_norm(const ExpMomentSpec& spec, const ScalarField& f);
// admissible interval (c_min, c_max) for a single constant C satisfying
//   C e^{c_b a/2 <v>^beta} <= G <= C e^{c_b a <v>^beta}
// pointwise over the grid's <v> range; the sandwich holds iff c_min <= c_max
std::array<double, 2> exp_moment_sandwich(const ExpMomentSpec& spec,
                                          const VelocityGrid& g, double c_b = 1.0);

struct GevreySpec {
    double c = 0.1;
    double beta = 1.0;
    double t = 0.5;
};

struct GevreyResult {
    double value = 0.0;
    bool diverged = false;  // multiplier overflowed the accumulator
};

// spectral multiplier e^{c (phi(t) |xi|^2)^{beta/(beta+3)}},
// phi(t) = min(t/|log t|, 1)
GevreyResult gevrey_norm(const GevreySpec& spec, const ScalarField& f);
double gevrey_phi(double t);

struct TrajectoryPoint {
    double t = 0.0;
    long step = 0;
    FluidMoments mom;
    double entropy = 0.0;
    double fisher = 0.0;
    double l2 = 0.0;
    std::vector<double> norm_values;       // one per configured NormSpec
    std::vector<double> exp_moment_values; // one per configured ExpMomentSpec
    std::vector<double> gevrey_values;     // one per configured GevreySpec
};

struct TrajectoryRecord {
    std::vector<NormSpec> norm_specs;
    std::vector<ExpMomentSpec> exp_specs;
    std::vector<GevreySpec> gevrey_specs;
    std::vector<TrajectoryPoint> points;

    // frozen column schema (append-only): t, step, rho, ux, uy, uz, T, energy,
    // entropy, fisher, l2, then norm_0.., exp_0.., gevrey_0..
    std::string csv_header() const;
    std::string csv_row(const TrajectoryPoint& p) const;
    std::string to_csv() const;
};

} // namespace landau
