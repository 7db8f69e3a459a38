#include "landau/experiments.hpp"

#include "landau/fft.hpp"
#include "landau/partition.hpp"
#include "landau/rng.hpp"

#include <algorithm>
#include <cmath>

namespace landau {

ScalarField make_bimodal(const VelocityGrid& g, double rho, double sep, double T) {
    ScalarField a = maxwellian(g, 0.5 * rho, {sep, 0.0, 0.0}, T);
    ScalarField b = maxwellian(g, 0.5 * rho, {-sep, 0.0, 0.0}, T);
    for (std::size_t i = 0; i < a.size(); ++i) a.v[i] += b.v[i];
    return a;
}

namespace {
double soft_highpass(double xi, double xi_lo) {
    return 0.5 * (1.0 + std::tanh((xi - xi_lo) / 0.6));
}

// C^inf ramp 0 -> 1 on [0, 1] through the exponential glue
double smoothstep01(double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double a = std::exp(-0.05 / y);
    double b = std::exp(-0.05 / (1.0 - y));
    return a / (a + b);
}

// fill the half-spectrum with env(|xi|) * random phases, then repair the
// conjugate symmetry on the self-mirrored planes so the inverse transform is
// exact; magnitudes stay equal to the envelope everywhere
void random_phase_spectrum(SpectralField& F, Rng& rng, double decay,
                           double xi_lo) {
    const VelocityGrid& g = F.grid;
    auto env = [&](double xi2) {
        double e = std::pow(1.0 + xi2, -0.5 * decay);
        if (xi_lo > 0.0) e *= soft_highpass(std::sqrt(xi2), xi_lo);
        return e;
    };
    if (g.dim == 1) {
        const int nh = g.nz_half();
        for (int k = 0; k < nh; ++k) {
            double th = 2.0 * M_PI * rng.uniform();
            double m = env(g.xi(k) * g.xi(k));
            bool self = (k == 0 || 2 * k == g.n);
            F.c[k] = self ? std::complex<double>(m, 0.0)
                          : std::polar(m, th);
        }
        return;
    }
    const int n = g.n, nh = g.nz_half();
    std::size_t idx = 0;
    for (int kx = 0; kx < n; ++kx)
        for (int ky = 0; ky < n; ++ky)
            for (int kz = 0; kz < nh; ++kz, ++idx) {
                double th = 2.0 * M_PI * rng.uniform();
                double xx = g.xi(kx), yy = g.xi(ky), zz = g.xi(kz);
                F.c[idx] = std::polar(env(xx * xx + yy * yy + zz * zz), th);
            }
    for (int kz : {0, n / 2}) {
        for (int kx = 0; kx < n; ++kx)
            for (int ky = 0; ky < n; ++ky) {
                int mx = (n - kx) % n, my = (n - ky) % n;
                std::size_t here = (static_cast<std::size_t>(kx) * n + ky) * nh + kz;
                if (mx == kx && my == ky) {
                    F.c[here] = std::abs(F.c[here]);
                } else if (std::make_pair(mx, my) < std::make_pair(kx, ky)) {
                    std::size_t mirror =
                        (static_cast<std::size_t>(mx) * n + my) * nh + kz;
                    F.c[here] = std::conj(F.c[mirror]);
                }
            }
    }
}
} // namespace

ScalarField make_rough_fourier(const VelocityGrid& g, double r, std::uint64_t seed,
                               double delta, double xi_lo) {
    Rng rng(seed, "rough-fourier");
    SpectralField F(g);
    random_phase_spectrum(F, rng, 0.5 * g.dim + r + delta, xi_lo);
    ScalarField f = inverse(F);
    double nl2 = norm_l2(f);
    if (nl2 > 0.0)
        for (double& x : f.v) x /= nl2;
    return f;
}

ScalarField make_rough_fourier_nonneg(const VelocityGrid& g, double r,
                                      std::uint64_t seed, double mass,
                                      double delta, double xi_lo) {
    if (g.dim != 3)
        throw std::invalid_argument("nonneg rough data is built in dim 3");
    if (!(mass > 0.0)) throw std::invalid_argument("target mass must be positive");
    Rng rng(seed, "rough-nonneg");
    ScalarField wn(g);
    for (std::size_t i = 0; i < wn.size(); ++i) wn.v[i] = rng.normal();
    SpectralField W = forward(wn);
    const double decay = 0.5 * g.dim + r + delta;
    for_each_mode(g, [&](std::size_t i, double x, double y, double z, double) {
        double xi2 = x * x + y * y + z * z;
        double e = std::pow(1.0 + xi2, -0.5 * decay);
        if (xi_lo > 0.0) e *= soft_highpass(std::sqrt(xi2), xi_lo);
        W.c[i] *= e;
    });
    ScalarField tex = inverse(W);

    double mean = 0.0;
    for (double x : tex.v) mean += x;
    mean /= static_cast<double>(tex.size());
    double var = 0.0;
    for (double x : tex.v) var += (x - mean) * (x - mean);
    double sigma = std::sqrt(var / static_cast<double>(tex.size()));
    if (!(sigma > 0.0)) throw std::runtime_error("degenerate rough texture");

    // plateau bulk: flat on |v_a| <= 0.65 L per axis, C^inf drop by 0.9625 L
    const double lo = 0.65 * g.L, wdt = 0.3125 * g.L;
    ScalarField f(g);
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i) {
        double tx = 1.0 - smoothstep01((std::abs(g.node(i)) - lo) / wdt);
        for (int j = 0; j < g.n; ++j) {
            double ty = tx * (1.0 - smoothstep01((std::abs(g.node(j)) - lo) / wdt));
            for (int k = 0; k < g.n; ++k, ++idx) {
                double tap =
                    ty * (1.0 - smoothstep01((std::abs(g.node(k)) - lo) / wdt));
                f.v[idx] =
                    tap * (1.0 + 0.9 * std::tanh(tex.v[idx] / (1.1 * sigma)));
            }
        }
    }
    double m = integrate(f);
    if (!(m > 0.0)) throw std::runtime_error("rough data lost its mass");
    double s = mass / m;
    for (double& x : f.v) x *= s;
    return f;
}

ScalarField make_separated_mixture(const VelocityGrid& g, std::uint64_t seed) {
    if (g.dim != 3)
        throw std::invalid_argument("separated mixtures are built in dim 3");
    static const double base[3][3] = {
        {1.0, 0.0, 0.0}, {-0.7, 0.6, 0.0}, {0.2, -0.8, 0.5}};
    Rng rng(seed, "mixture");
    double s = 0.9 + 0.5 * rng.uniform();
    int ncomp = 2 + static_cast<int>(rng.raw() & 1u);
    ScalarField f(g);
    for (int c = 0; c < ncomp; ++c) {
        double rho = 0.5 + 1.5 * rng.uniform();
        double T = 1.8 + 1.0 * rng.uniform();
        std::array<double, 3> u;
        for (int a = 0; a < 3; ++a)
            u[a] = s * base[c][a] + (-0.15 + 0.3 * rng.uniform());
        ScalarField m = maxwellian(g, rho, u, T);
        for (std::size_t i = 0; i < f.size(); ++i) f.v[i] += m.v[i];
    }
    return f;
}

RoughDataResult rough_data(const RoughDataSpec& spec, const VelocityGrid& g) {
    if (g.dim != 1)
        throw std::invalid_argument("translate-bump data is one-dimensional");
    if (spec.J < 1) throw std::invalid_argument("need at least two translates");
    double far = 1.5 * std::pow(8.0, spec.J) + spec.bump_width;
    if (far >= g.L)
        throw std::invalid_argument(
            "grid half-width too small for the requested translates");

    RoughDataResult out;
    out.f = ScalarField(g);
    for (int i = 0; i < g.n; ++i) {
        double v = g.node(i);
        double acc = 0.0;
        for (int j = 0; j <= spec.J; ++j)
            if (std::abs(v - 1.5 * std::pow(8.0, j)) <= spec.bump_width)
                acc += 1.0;
        out.f.v[i] = acc * std::pow(1.0 + v * v, -0.5 * spec.l);
    }

    DyadicPartition part = build_partition();
    ProjectorBank bank = build_projectors(g, part);
    if (bank.k_max < 3 * spec.J || bank.j_max < spec.J)
        throw std::invalid_argument("projector bank too small for the translates");

    double S = 0.0;
    for (int j = 0; j <= spec.J; ++j) {
        ScalarField pj = project_phase(bank, 3 * j, out.f);
        ScalarField gj = project_freq(bank, j, pj);
        double inc = std::pow(2.0, 2.0 * (spec.eps + 3.0 * spec.l) * j) *
                     integrate_weighted(gj, gj);
        S += inc;
        out.S.push_back(S);
        if (j > 0) out.ratios.push_back(out.S[j] / out.S[j - 1]);
    }
    return out;
}

RateFit fit_rate(const std::vector<double>& ts, const std::vector<double>& vals,
                 double t0, double t1, double theoretical, double tolerance,
                 const NormSpec& spec) {
    if (ts.size() != vals.size())
        throw std::invalid_argument("rate fit series length mismatch");
    std::vector<double> xs, ys;
    for (std::size_t i = 2; i < ts.size(); ++i) {
        if (ts[i] < t0 * (1.0 - 1e-9) || ts[i] > t1 * (1.0 + 1e-9)) continue;
        if (!(vals[i] > 0.0) || !std::isfinite(vals[i]))
            throw std::invalid_argument("rate fit needs positive finite samples");
        xs.push_back(std::log(ts[i]));
        ys.push_back(std::log(vals[i]));
    }
    if (xs.size() < 8)
        throw std::invalid_argument("rate fit needs at least 8 samples in window");
    const std::size_t N = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= N;
    my /= N;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    RateFit fit;
    fit.spec = spec;
    fit.t0 = t0;
    fit.t1 = t1;
    fit.slope = sxy / sxx;
    double sse = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double r = ys[i] - my - fit.slope * (xs[i] - mx);
        sse += r * r;
    }
    fit.stderr_ = N > 2 ? std::sqrt(sse / (static_cast<double>(N) - 2.0) / sxx) : 0.0;
    fit.theoretical = theoretical;
    fit.tolerance = tolerance;
    fit.samples = static_cast<int>(N);
    fit.pass = std::abs(fit.slope - theoretical) <= tolerance;
    return fit;
}

RateFit heat_smoothing_rate(const ScalarField& f0, double sobolev_n, double r,
                            double t0, double t1, int samples) {
    if (samples < 11)
        throw std::invalid_argument("need at least 11 samples (2 are dropped)");
    if (!(t0 > 0.0) || !(t1 > t0))
        throw std::invalid_argument("need 0 < t0 < t1");
    const VelocityGrid& g = f0.grid;
    SpectralField F = forward(f0);
    // two lead-in samples below t0 so the standard transient drop leaves a
    // geometric ladder spanning exactly [t0, t1]
    const double q = std::pow(t1 / t0, 1.0 / (samples - 3));
    std::vector<double> ts(samples), vals(samples);
    double scale = std::pow(g.h, g.dim) / static_cast<double>(g.size());
    for (int s = 0; s < samples; ++s) {
        double t = t0 * std::pow(q, s - 2);
        double sum = 0.0, c = 0.0;
        for_each_mode(g, [&](std::size_t i, double x, double y, double z,
                             double w) {
            double xi2 = x * x + y * y + z * z;
            double term = w * std::pow(1.0 + xi2, sobolev_n) *
                          std::exp(-2.0 * t * xi2) * std::norm(F.c[i]);
            double yk = term - c;
            double tk = sum + yk;
            c = (tk - sum) - yk;
            sum = tk;
        });
        ts[s] = t;
        vals[s] = std::sqrt(scale * sum);
    }
    return fit_rate(ts, vals, t0, t1, -0.5 * sobolev_n + 0.5 * r, 0.05,
                    NormSpec{sobolev_n, 0.0, 0.0});
}

std::vector<RateFit> heat_refinement_study(double sobolev_n, double r, double L,
                                           std::uint64_t seed,
                                           const std::vector<HeatRefinementLevel>& levels) {
    std::vector<HeatRefinementLevel> lv = levels;
    if (lv.empty())
        lv = {{64, 0.02, 0.2}, {96, 0.009, 0.09}, {128, 0.004, 0.04}};
    std::vector<RateFit> out;
    for (const auto& level : lv) {
        VelocityGrid g(3, level.n_grid, L);
        ScalarField f0 = make_rough_fourier(g, r, seed);
        out.push_back(heat_smoothing_rate(f0, sobolev_n, r, level.t0, level.t1));
    }
    return out;
}

RateFit landau_smoothing_rate(const LandauRateConfig& cfg) {
    VelocityGrid g(3, cfg.n_grid, cfg.L);
    CoulombSymbols sym = build_symbols(g);
    ScalarField f0 = make_rough_fourier_nonneg(g, 0.0, cfg.seed, cfg.mass);

    SchemeConfig sc;
    sc.scheme = Scheme::rk4;
    sc.cfl_safety = 0.35;
    sc.t_end = cfg.t_end;
    sc.record_every = 1;
    sc.dt = std::min(stable_dt(Model::landau, &sym, f0, sc), cfg.dt_cap);

    NormSpec measured{1.0, 0.0, cfg.weight_l - 1.5};
    RunOptions opts;
    opts.norm_specs = {measured};
    RunResult rr = run(Model::landau, &sym, f0, sc, opts);
    if (rr.aborted)
        throw std::runtime_error("smoothing-rate run aborted on non-finite field");

    std::vector<double> ts, vals;
    for (const auto& p : rr.record.points) {
        ts.push_back(p.t);
        vals.push_back(p.norm_values[0]);
    }
    return fit_rate(ts, vals, cfg.t0, cfg.t1, -0.5, 0.3, measured);
}

WeightScanResult weight_index_scan(double sobolev_n, double l, double r,
                                   double eps, double t_end, int n_grid,
                                   double L, int J) {
    VelocityGrid g(1, n_grid, L);
    ScalarField f0(g);
    for (int i = 0; i < g.n; ++i) {
        double v = g.node(i);
        double acc = 0.0;
        for (int j = 0; j <= J; ++j)
            if (std::abs(v - 1.5 * std::pow(8.0, j)) <= 0.5) acc += 1.0;
        f0.v[i] = acc * std::pow(1.0 + v * v, -0.5 * l);
    }

    const double wb = l - 1.5 * sobolev_n + 1.5 * r;
    const double wg = l - (sobolev_n - eps) / 3.0;

    SchemeConfig sc;
    sc.scheme = Scheme::rk4;
    sc.cfl_safety = 0.35;
    sc.t_end = t_end;
    double dt = stable_dt(Model::toy, nullptr, f0, sc);
    long total = static_cast<long>(std::ceil(t_end / dt));
    sc.record_every = static_cast<int>(std::max(1.0, std::ceil(total / 10.0)));

    RunOptions opts;
    opts.norm_specs = {NormSpec{sobolev_n, 0.0, wb}, NormSpec{sobolev_n, 0.0, wg}};
    RunResult rr = run(Model::toy, nullptr, f0, sc, opts);
    if (rr.aborted)
        throw std::runtime_error("weight scan run aborted on non-finite field");

    WeightScanResult out;
    for (const auto& p : rr.record.points) out.ts.push_back(p.t);
    for (int col = 0; col < 2; ++col) {
        WeightScanRow row;
        row.w = col == 0 ? wb : wg;
        row.predicted_bounded = col == 0;
        for (const auto& p : rr.record.points)
            row.series.push_back(p.norm_values[col]);
        double first = row.series.front();
        double sup = 0.0;
        for (double v : row.series) sup = std::max(sup, v);
        row.sup_ratio = first > 0.0 ? sup / first : HUGE_VAL;
        row.growing = true;
        std::size_t m = row.series.size();
        if (m < 5) {
            row.growing = false;
        } else {
            for (std::size_t i = m - 5; i + 1 < m; ++i)
                if (!(row.series[i + 1] > row.series[i])) row.growing = false;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

namespace {
// exponential tail index of f along the +x axis: OLS of -log f against <v>
// over the band |v| in [0.4 L, 0.85 L]
double tail_exponent(const ScalarField& f) {
    const VelocityGrid& g = f.grid;
    const int c = g.n / 2;
    std::vector<double> xs, ys;
    for (int i = c; i < g.n; ++i) {
        double v = g.node(i);
        if (v < 0.4 * g.L || v > 0.85 * g.L) continue;
        std::size_t idx = g.dim == 1
                              ? static_cast<std::size_t>(i)
                              : (static_cast<std::size_t>(i) * g.n + c) * g.n + c;
        if (!(f.v[idx] > 0.0))
            throw std::invalid_argument(
                "data has no measurable exponential tail (nonpositive values)");
        xs.push_back(std::sqrt(1.0 + v * v));
        ys.push_back(-std::log(f.v[idx]));
    }
    if (xs.size() < 3)
        throw std::invalid_argument("tail fit needs at least 3 axis samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= xs.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}
} // namespace

MomentPropagationResult moment_propagation(const CoulombSymbols& sym,
                                           const ScalarField& f0, double a,
                                           double beta, double t_end,
                                           const SchemeConfig& cfg) {
    MomentPropagationResult out;
    out.b_estimate = tail_exponent(f0);
    if (!(a < 0.5 * out.b_estimate))
        throw std::invalid_argument(
            "moment index a must stay below b/2 for the measured tail index b");

    ExpMomentSpec es;
    es.a = a;
    es.beta = beta;
    SchemeConfig sc = cfg;
    sc.t_end = t_end;
    RunOptions opts;
    opts.exp_specs = {es};
    RunResult rr = run(Model::landau, &sym, f0, sc, opts);
    if (rr.aborted)
        throw std::runtime_error("moment run aborted on non-finite field");

    for (const auto& p : rr.record.points) {
        out.ts.push_back(p.t);
        out.values.push_back(p.exp_moment_values[0]);
    }
    out.initial = out.values.front();
    for (std::size_t i = 0; i < out.ts.size(); ++i)
        out.max_ratio = std::max(
            out.max_ratio, out.values[i] / (out.initial * (1.0 + out.ts[i])));
    out.pass = out.max_ratio <= 3.0;
    return out;
}

RelaxationResult relaxation(const CoulombSymbols& sym, const ScalarField& f0,
                            double t_end, const SchemeConfig& cfg) {
    FluidMoments m0 = moments(f0);
    ScalarField mu = maxwellian(f0.grid, m0.rho, m0.u, m0.T);
    double nmu = norm_l2(mu);

    RelaxationResult out;
    SchemeConfig sc = cfg;
    sc.t_end = t_end;
    RunOptions opts;
    opts.on_record = [&](const TrajectoryPoint& p, const ScalarField& f) {
        out.ts.push_back(p.t);
        out.rel_entropy.push_back(relative_entropy(f, mu));
        ScalarField d = f;
        for (std::size_t i = 0; i < d.size(); ++i) d.v[i] -= mu.v[i];
        out.l2_distance.push_back(norm_l2(d) / nmu);
    };
    RunResult rr = run(Model::landau, &sym, f0, sc, opts);
    if (rr.aborted)
        throw std::runtime_error("relaxation run aborted on non-finite field");

    out.final_distance = out.l2_distance.back();
    out.entropy_monotone = true;
    double slack = 1e-8 * std::max(std::abs(out.rel_entropy.front()), 1e-300);
    for (std::size_t i = 0; i + 1 < out.rel_entropy.size(); ++i)
        if (out.rel_entropy[i + 1] > out.rel_entropy[i] + slack)
            out.entropy_monotone = false;

    double e0 = 0.0;
    for (std::size_t i = 0; i < rr.record.points.size(); ++i) {
        const FluidMoments& m = rr.record.points[i].mom;
        if (i == 0) {
            e0 = m.energy;
            continue;
        }
        out.mass_drift =
            std::max(out.mass_drift, std::abs(m.rho - m0.rho) / m0.rho);
        for (int a = 0; a < 3; ++a)
            out.momentum_drift = std::max(
                out.momentum_drift, std::abs(m.rho * m.u[a] - m0.rho * m0.u[a]));
        out.energy_drift =
            std::max(out.energy_drift, std::abs(m.energy - e0) / std::abs(e0));
    }
    return out;
}

} // namespace landau
