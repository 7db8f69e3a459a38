#include "landau/partition.hpp"

#include <algorithm>
#include <cmath>

namespace landau {

namespace {
constexpr int kGlueSamples = 4096;

// glue bump w(s) = exp(-lam/s - lam/(1-s)) on (0,1)
double glue_w(double lam, double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return std::exp(-lam / s - lam / (1.0 - s));
}
} // namespace

DyadicPartition build_partition(double sharpness) {
    DyadicPartition p;
    p.sharpness = sharpness;
    p.table.assign(kGlueSamples + 1, 0.0);
    const double ds = 1.0 / kGlueSamples;
    double acc = 0.0;
    double prev = glue_w(sharpness, 0.0);
    for (int i = 1; i <= kGlueSamples; ++i) {
        double cur = glue_w(sharpness, i * ds);
        acc += 0.5 * (prev + cur) * ds;
        p.table[i] = acc;
        prev = cur;
    }
    for (double& x : p.table) x /= acc;  // normalised cumulative integral
    return p;
}

double DyadicPartition::psi(double r) const {
    r = std::abs(r);
    if (r <= 1.0) return 1.0;
    if (r >= 4.0 / 3.0) return 0.0;
    // transition variable on [0,1]
    double x = 3.0 * (r - 1.0);
    double pos = x * kGlueSamples;
    int i = static_cast<int>(pos);
    if (i >= kGlueSamples) i = kGlueSamples - 1;
    double frac = pos - i;
    double G = table[i] + frac * (table[i + 1] - table[i]);
    return 1.0 - G;
}

int overlap_constant(const DyadicPartition& part) {
    // measure the actual support [lo, hi] of phi and return the smallest N
    // with 2^N lo >= hi
    const int M = 20000;
    double lo = 8.0 / 3.0, hi = 0.0;
    for (int i = 0; i <= M; ++i) {
        double r = 3.0 * i / M;
        if (part.phi(r) > 1e-14) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    }
    int N = 1;
    while ((1 << N) * lo < hi) ++N;
    return N;
}

namespace {
// shells resolvable on the grid: the shell support starts at the measured
// lower edge of phi (numerically ~1), so shell j meets a ball of radius R
// iff 2^j < R within tolerance
int last_shell(double radius) {
    int j = -1;
    while (std::ldexp(1.0, j + 1) < radius) ++j;
    return j;
}

// caching threshold: full multiplier tables only for moderate grids
constexpr std::size_t kCacheBudget = (1u << 21);
} // namespace

ProjectorBank build_projectors(const VelocityGrid& grid,
                               const DyadicPartition& part) {
    ProjectorBank bank;
    bank.grid = grid;
    bank.part = part;
    const double sd = std::sqrt(static_cast<double>(grid.dim));
    bank.j_max = last_shell(sd * grid.xi_max());
    bank.k_max = last_shell(sd * grid.L);

    if (grid.spec_size() <= kCacheBudget) {
        bank.freq_mult.resize(bank.j_max + 2);
        for (int j = -1; j <= bank.j_max; ++j) {
            auto& m = bank.freq_mult[j + 1];
            m.resize(grid.spec_size());
            double scale = std::ldexp(1.0, -j);
            for_each_mode(grid, [&](std::size_t i, double x, double y, double z,
                                    double) {
                double r = std::sqrt(x * x + y * y + z * z);
                m[i] = j < 0 ? part.psi(r) : part.phi(scale * r);
            });
        }
    }
    if (grid.size() <= kCacheBudget) {
        bank.phase_mask.resize(bank.k_max + 2);
        for (int k = -1; k <= bank.k_max; ++k) {
            auto& m = bank.phase_mask[k + 1];
            m.resize(grid.size());
            double scale = std::ldexp(1.0, -k);
            if (grid.dim == 1) {
                for (int i = 0; i < grid.n; ++i) {
                    double v = grid.node(i);
                    m[i] = k < 0 ? part.psi(v) : part.phi(scale * std::abs(v));
                }
            } else {
                std::size_t idx = 0;
                for (int i = 0; i < grid.n; ++i) {
                    double x = grid.node(i);
                    for (int jn = 0; jn < grid.n; ++jn) {
                        double y = grid.node(jn);
                        for (int kn = 0; kn < grid.n; ++kn, ++idx) {
                            double z = grid.node(kn);
                            double r = std::sqrt(x * x + y * y + z * z);
                            m[idx] = k < 0 ? part.psi(r) : part.phi(scale * r);
                        }
                    }
                }
            }
        }
    }
    return bank;
}

namespace {
void check_shell(int idx, int lo, int hi, const char* what) {
    if (idx < lo || idx > hi)
        throw std::out_of_range(std::string(what) + " shell index out of range");
}
} // namespace

SpectralField project_freq(const ProjectorBank& bank, int j, const SpectralField& F) {
    check_shell(j, -1, bank.j_max, "frequency");
    SpectralField out(F.grid);
    if (!bank.freq_mult.empty()) {
        const auto& m = bank.freq_mult[j + 1];
        for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = m[i] * F.c[i];
        return out;
    }
    const double scale = std::ldexp(1.0, -j);
    for_each_mode(F.grid, [&](std::size_t i, double x, double y, double z, double) {
        double r = std::sqrt(x * x + y * y + z * z);
        double w = j < 0 ? bank.part.psi(r) : bank.part.phi(scale * r);
        out.c[i] = w * F.c[i];
    });
    return out;
}

ScalarField project_freq(const ProjectorBank& bank, int j, const ScalarField& f) {
    return inverse(project_freq(bank, j, forward(f)));
}

ScalarField project_phase(const ProjectorBank& bank, int k, const ScalarField& f) {
    check_shell(k, -1, bank.k_max, "phase");
    const VelocityGrid& g = f.grid;
    ScalarField out(g);
    if (!bank.phase_mask.empty()) {
        const auto& m = bank.phase_mask[k + 1];
        for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = m[i] * f.v[i];
        return out;
    }
    const double scale = std::ldexp(1.0, -k);
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) {
            double v = std::abs(g.node(i));
            double w = k < 0 ? bank.part.psi(v) : bank.part.phi(scale * v);
            out.v[i] = w * f.v[i];
        }
        return out;
    }
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i) {
        double x = g.node(i);
        for (int jn = 0; jn < g.n; ++jn) {
            double y = g.node(jn);
            for (int kn = 0; kn < g.n; ++kn, ++idx) {
                double z = g.node(kn);
                double r = std::sqrt(x * x + y * y + z * z);
                double w = k < 0 ? bank.part.psi(r) : bank.part.phi(scale * r);
                out.v[idx] = w * f.v[idx];
            }
        }
    }
    return out;
}

BernsteinRatios bernstein_check(const ProjectorBank& bank, int j,
                                const ScalarField& f) {
    if (j < 0) throw std::out_of_range("bernstein_check needs j >= 0");
    SpectralField Fj = project_freq(bank, j, forward(f));
    const VelocityGrid& g = f.grid;
    double num = 0.0, den = 0.0;
    for_each_mode(g, [&](std::size_t i, double x, double y, double z, double w) {
        double xi2 = x * x + y * y + z * z;
        double e = w * std::norm(Fj.c[i]);
        num += xi2 * e;
        den += e;
    });
    double scale = std::ldexp(1.0, -j);
    if (den == 0.0) return {0.0, 0.0};
    double r = std::sqrt(num / den) * scale;  // ||grad F_j f|| / (2^j ||F_j f||)
    return {r, r == 0.0 ? 0.0 : 1.0 / r};
}

} // namespace landau
