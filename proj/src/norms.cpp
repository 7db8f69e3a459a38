#include "landau/norms.hpp"

#include <cmath>

namespace landau {

namespace {
double hd(const VelocityGrid& g) {
    double x = 1.0;
    for (int d = 0; d < g.dim; ++d) x *= g.h;
    return x;
}

double multiplier(const NormSpec& spec, double xi2) {
    double bracket = 1.0 + xi2;
    double m = std::pow(bracket, 0.5 * spec.m);
    if (spec.s != 0.0)
        m *= std::pow(std::log(2.0 + std::sqrt(bracket)), spec.s);
    return m;
}
} // namespace

NormResult norm_hmsl_direct(const NormSpec& spec, const ScalarField& f) {
    const VelocityGrid& g = f.grid;
    ScalarField wf(g);
    {
        ScalarField w = weight_field(g, spec.l);
        for (std::size_t i = 0; i < g.size(); ++i) wf.v[i] = w.v[i] * f.v[i];
    }
    SpectralField F = forward(wf);
    const double top = 0.5 * g.xi_max();  // top dyadic octave of the grid ball
    double sum = 0.0, comp = 0.0, top_sum = 0.0;
    for_each_mode(g, [&](std::size_t i, double x, double y, double z, double w) {
        double xi2 = x * x + y * y + z * z;
        double m = multiplier(spec, xi2);
        double e = w * m * m * std::norm(F.c[i]);
        double yk = e - comp;
        double t = sum + yk;
        comp = (t - sum) - yk;
        sum = t;
        if (xi2 > top * top) top_sum += e;
    });
    double scale = hd(g) / static_cast<double>(g.size());
    NormResult r;
    r.value = std::sqrt(scale * sum);
    r.truncated = sum > 0.0 && top_sum > 0.01 * sum;
    return r;
}

double dyadic_freq_weight(const NormSpec& spec, int j) {
    double centre2 = j < 0 ? 0.0 : 2.25 * std::pow(4.0, j);
    return std::pow(1.0 + centre2, spec.m) * std::pow(2.0 + j, 2.0 * spec.s);
}

double dyadic_phase_weight(const NormSpec& spec, int k) {
    double centre2 = k < 0 ? 0.0 : 2.25 * std::pow(4.0, k);
    return std::pow(1.0 + centre2, spec.l);
}

NormResult norm_hmsl_dyadic(const ProjectorBank& bank, const NormSpec& spec,
                            const ScalarField& f) {
    const VelocityGrid& g = f.grid;
    double scale = hd(g) / static_cast<double>(g.size());
    double sum = 0.0, top_sum = 0.0;
    for (int k = -1; k <= bank.k_max; ++k) {
        ScalarField pk = project_phase(bank, k, f);
        SpectralField Pk = forward(pk);
        for (int j = -1; j <= bank.j_max; ++j) {
            SpectralField Fj = project_freq(bank, j, Pk);
            double e = 0.0;
            for_each_mode(g, [&](std::size_t i, double, double, double,
                                 double w) { e += w * std::norm(Fj.c[i]); });
            double term =
                dyadic_freq_weight(spec, j) * dyadic_phase_weight(spec, k) * scale * e;
            sum += term;
            if (j == bank.j_max || k == bank.k_max) top_sum += term;
        }
    }
    NormResult r;
    r.value = std::sqrt(sum);
    r.truncated = sum > 0.0 && top_sum > 0.01 * sum;
    return r;
}

int argmax_shell(const ProjectorBank& bank, const NormSpec& spec,
                 const ScalarField& f) {
    SpectralField F = forward(f);
    int best = -1;
    double best_val = -1.0;
    for (int j = -1; j <= bank.j_max; ++j) {
        SpectralField Fj = project_freq(bank, j, F);
        double e = 0.0;
        for_each_mode(f.grid, [&](std::size_t i, double, double, double,
                                  double w) { e += w * std::norm(Fj.c[i]); });
        double val = dyadic_freq_weight(spec, j) * e;
        if (val > best_val) {
            best_val = val;
            best = j;
        }
    }
    return best;
}

} // namespace landau
