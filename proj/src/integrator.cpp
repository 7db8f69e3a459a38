#include "landau/integrator.hpp"

#include "landau/fft.hpp"
#include "landau/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace landau {

Model model_from_string(const std::string& s) {
    if (s == "landau") return Model::landau;
    if (s == "toy") return Model::toy;
    if (s == "semilinear-heat") return Model::semilinear_heat;
    if (s == "pure-heat") return Model::pure_heat;
    throw std::invalid_argument("unknown model '" + s + "'");
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "rk4") return Scheme::rk4;
    if (s == "euler") return Scheme::euler;
    if (s == "imex-frozen") return Scheme::imex_frozen;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

std::string to_string(Model m) {
    switch (m) {
        case Model::landau: return "landau";
        case Model::toy: return "toy";
        case Model::semilinear_heat: return "semilinear-heat";
        case Model::pure_heat: return "pure-heat";
    }
    return "?";
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::rk4: return "rk4";
        case Scheme::euler: return "euler";
        case Scheme::imex_frozen: return "imex-frozen";
    }
    return "?";
}

namespace {
ScalarField laplacian(const ScalarField& f) {
    SpectralField F = forward(f);
    apply_radial_multiplier(F, [](double xi2) { return -xi2; });
    return inverse(F);
}
} // namespace

ScalarField rhs(Model model, const CoulombSymbols* sym, const ScalarField& f) {
    switch (model) {
        case Model::landau:
            if (!sym) throw std::invalid_argument("landau rhs needs symbols");
            return q_conservative(*sym, f);
        case Model::toy: {
            ScalarField wf = weight_field(f.grid, -3.0);
            ScalarField g(f.grid);
            for (std::size_t i = 0; i < f.size(); ++i) g.v[i] = wf.v[i] * f.v[i];
            return laplacian(g);
        }
        case Model::semilinear_heat: {
            ScalarField out = laplacian(f);
            const double c = 8.0 * M_PI;
            for (std::size_t i = 0; i < f.size(); ++i)
                out.v[i] += c * f.v[i] * f.v[i];
            return out;
        }
        case Model::pure_heat:
            return laplacian(f);
    }
    throw std::logic_error("unreachable");
}

namespace {
double max_eig_conv_a(const CoulombSymbols& sym, const ScalarField& f) {
    TensorField A = conv_a(sym, f);
    const auto& axx = A.comp[0];
    const auto& ayy = A.comp[1];
    const auto& azz = A.comp[2];
    const auto& axy = A.comp[3];
    const auto& axz = A.comp[4];
    const auto& ayz = A.comp[5];
    double best = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double p1 = axy[i] * axy[i] + axz[i] * axz[i] + ayz[i] * ayz[i];
        double q = (axx[i] + ayy[i] + azz[i]) / 3.0;
        double p2 = (axx[i] - q) * (axx[i] - q) + (ayy[i] - q) * (ayy[i] - q) +
                    (azz[i] - q) * (azz[i] - q) + 2.0 * p1;
        double p = std::sqrt(std::max(p2 / 6.0, 1e-300));
        double bxx = (axx[i] - q) / p, byy = (ayy[i] - q) / p, bzz = (azz[i] - q) / p;
        double bxy = axy[i] / p, bxz = axz[i] / p, byz = ayz[i] / p;
        double detB = bxx * (byy * bzz - byz * byz) - bxy * (bxy * bzz - byz * bxz) +
                      bxz * (bxy * byz - byy * bxz);
        double r = std::clamp(detB / 2.0, -1.0, 1.0);
        double lam = q + 2.0 * p * std::cos(std::acos(r) / 3.0);
        best = std::max(best, lam);
    }
    return best;
}
} // namespace

double stable_dt(Model model, const CoulombSymbols* sym, const ScalarField& f,
                 const SchemeConfig& cfg) {
    double diff = 1.0;
    if (model == Model::landau) {
        if (!sym) throw std::invalid_argument("landau stable_dt needs symbols");
        diff = max_eig_conv_a(*sym, f);
        if (!(diff > 0.0)) diff = 1.0;
    }
    const VelocityGrid& g = f.grid;
    return cfg.cfl_safety * g.h * g.h / (2.0 * g.dim * diff);
}

double semilinear_blowup_bound(const ScalarField& f0) {
    double m0 = integrate(f0);
    if (!(m0 > 0.0)) return HUGE_VAL;
    double vol = std::pow(2.0 * f0.grid.L, f0.grid.dim);
    return vol / (8.0 * M_PI * m0);
}

namespace {
bool finite(const ScalarField& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return false;
    return true;
}

FluidMoments safe_moments(const ScalarField& f) {
    double m0 = integrate(f);
    if (m0 > 0.0) {
        try {
            return moments(f);
        } catch (const std::exception&) {
        }
    }
    FluidMoments m;
    m.rho = m0;
    ScalarField w2 = weight_field(f.grid, 2.0);  // <v>^2 = 1 + |v|^2
    m.energy = 0.5 * (integrate_weighted(f, w2) - m0);
    return m;
}

TrajectoryPoint diagnose(const ScalarField& f, double t, long step,
                         const RunOptions& opts) {
    TrajectoryPoint p;
    p.t = t;
    p.step = step;
    p.mom = safe_moments(f);
    p.entropy = entropy(f);
    p.fisher = fisher(f);
    p.l2 = norm_l2(f);
    for (const auto& ns : opts.norm_specs)
        p.norm_values.push_back(norm_hmsl_direct(ns, f).value);
    for (const auto& es : opts.exp_specs)
        p.exp_moment_values.push_back(exp_moment_norm(es, f));
    for (const auto& gs : opts.gevrey_specs) {
        GevreySpec at = gs;
        at.t = std::max(t, 1e-12);
        p.gevrey_values.push_back(gevrey_norm(at, f).value);
    }
    return p;
}

std::string write_checkpoint(const std::string& dir, const ScalarField& f,
                             double t, long step, const std::string& hash) {
    std::ostringstream base;
    base << dir << "/checkpoint_" << step;
    write_field(base.str() + ".ldnf", f);
    std::ostringstream js;
    char tb[32];
    snprintf(tb, sizeof tb, "%.17g", t);
    js << "{\"t\": " << tb << ", \"step\": " << step << ", \"config_hash\": \""
       << hash << "\"}\n";
    std::ofstream os(base.str() + ".json", std::ios::binary);
    os << js.str();
    return base.str() + ".ldnf";
}

void clip_negatives(ScalarField& f, double& clipped_total) {
    double before = integrate(f);
    double removed = 0.0;
    for (double& x : f.v)
        if (x < 0.0) {
            removed -= x;
            x = 0.0;
        }
    if (removed == 0.0) return;
    double after = integrate(f);
    if (after > 0.0 && before > 0.0) {
        double s = before / after;
        for (double& x : f.v) x *= s;
    }
    const double hd = std::pow(f.grid.h, f.grid.dim);
    clipped_total += removed * hd;
}
} // namespace

RunResult run(Model model, const CoulombSymbols* sym, const ScalarField& f0,
              const SchemeConfig& cfg, const RunOptions& opts) {
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (!(cfg.cfl_safety > 0.0) || cfg.cfl_safety > 1.0)
        throw std::invalid_argument("cfl_safety must lie in (0, 1]");
    if (cfg.dt < 0.0) throw std::invalid_argument("dt must be nonnegative");
    if (cfg.record_every <= 0)
        throw std::invalid_argument("record_every must be positive");

    RunResult res;
    res.record.norm_specs = opts.norm_specs;
    res.record.exp_specs = opts.exp_specs;
    res.record.gevrey_specs = opts.gevrey_specs;

    ScalarField f = f0;
    double dt = cfg.dt > 0.0 ? cfg.dt : stable_dt(model, sym, f, cfg);
    if (!(dt > 0.0)) throw std::invalid_argument("derived dt is not positive");

    // frozen-coefficient imex viscosity: constant over the whole run
    double nu = 1.0;
    if (cfg.scheme == Scheme::imex_frozen && model == Model::landau && sym) {
        nu = max_eig_conv_a(*sym, f);
        if (!(nu > 0.0)) nu = 1.0;
    }

    auto record_point = [&](double t, long step) {
        TrajectoryPoint p = diagnose(f, t, step, opts);
        res.record.points.push_back(p);
        if (opts.on_record) opts.on_record(p, f);
        if (!opts.checkpoint_dir.empty())
            res.abort_checkpoint = write_checkpoint(opts.checkpoint_dir, f, t,
                                                    step, opts.config_hash);
    };

    record_point(0.0, 0);

    double t = 0.0;
    long step = 0;
    ScalarField prev;  // last finite state, kept for the abort checkpoint
    const double eps = 1e-12 * cfg.t_end;
    while (t < cfg.t_end - eps) {
        if (cfg.dt == 0.0 && model == Model::landau && step > 0 && step % 10 == 0)
            dt = stable_dt(model, sym, f, cfg);
        if (!opts.checkpoint_dir.empty()) prev = f;
        double s = std::min(dt, cfg.t_end - t);
        switch (cfg.scheme) {
            case Scheme::euler: {
                ScalarField k1 = rhs(model, sym, f);
                for (std::size_t i = 0; i < f.size(); ++i) f.v[i] += s * k1.v[i];
                break;
            }
            case Scheme::rk4: {
                ScalarField k1 = rhs(model, sym, f);
                ScalarField tmp(f.grid);
                for (std::size_t i = 0; i < f.size(); ++i)
                    tmp.v[i] = f.v[i] + 0.5 * s * k1.v[i];
                ScalarField k2 = rhs(model, sym, tmp);
                for (std::size_t i = 0; i < f.size(); ++i)
                    tmp.v[i] = f.v[i] + 0.5 * s * k2.v[i];
                ScalarField k3 = rhs(model, sym, tmp);
                for (std::size_t i = 0; i < f.size(); ++i)
                    tmp.v[i] = f.v[i] + s * k3.v[i];
                ScalarField k4 = rhs(model, sym, tmp);
                for (std::size_t i = 0; i < f.size(); ++i)
                    f.v[i] += s / 6.0 *
                              (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
                break;
            }
            case Scheme::imex_frozen: {
                // (I - s nu Lap) f' = f + s (rhs(f) + nu Lap f)
                ScalarField r = rhs(model, sym, f);
                ScalarField lf = laplacian(f);
                SpectralField F = forward(f);
                SpectralField R = forward(r);
                SpectralField LF = forward(lf);
                for_each_mode(f.grid, [&](std::size_t i, double x, double y,
                                          double z, double) {
                    double xi2 = x * x + y * y + z * z;
                    F.c[i] = (F.c[i] + s * (R.c[i] + nu * LF.c[i])) /
                             (1.0 + s * nu * xi2);
                });
                f = inverse(F);
                break;
            }
        }
        t += s;
        ++step;
        if (cfg.positivity_clip) clip_negatives(f, res.clipped_mass);
        if (!finite(f)) {
            res.aborted = true;
            res.steps = step;
            if (!opts.checkpoint_dir.empty() && prev.size() == f.size())
                res.abort_checkpoint = write_checkpoint(
                    opts.checkpoint_dir, prev, t - s, step - 1, opts.config_hash);
            res.final_field = f;
            return res;
        }
        if (step % cfg.record_every == 0 || t >= cfg.t_end - eps)
            record_point(t, step);
    }
    res.steps = step;
    res.final_field = f;
    double m0 = std::abs(integrate(f0));
    res.clip_flagged = m0 > 0.0 && res.clipped_mass > 1e-8 * m0;
    return res;
}

} // namespace landau
