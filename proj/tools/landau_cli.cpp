// command-line front end: runs, norm evaluation, rate experiments and the
// selftest invariant suite.  exit codes: 0 ok, 1 invalid config / usage,
// 2 run aborted on non-finite values, 3 selftest failure.
#include "landau/config.hpp"
#include "landau/diagnostics.hpp"
#include "landau/experiments.hpp"
#include "landau/fft.hpp"
#include "landau/integrator.hpp"
#include "landau/norms.hpp"
#include "landau/operator.hpp"
#include "landau/rng.hpp"
#include "landau/serialize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace landau;

namespace {

constexpr const char* kVersion = "0.4.1";

const char* kConfigKeyHelp =
    "config keys (file lines 'key = value', overrides 'key=value'):\n"
    "  model           landau | toy | semilinear-heat | pure-heat   [landau]\n"
    "  dim             1 or 3 (landau needs 3)                      [3]\n"
    "  n               nodes per axis, even 2-3-smooth >= 8         [32]\n"
    "  L               box half width, domain [-L, L)^dim           [8]\n"
    "  scheme          rk4 | euler | imex-frozen                    [rk4]\n"
    "  dt              step; 0 picks the cfl-stable step            [0]\n"
    "  cfl_safety      stable-step safety factor in (0, 1]          [0.35]\n"
    "  t_end           integration end time                         [1]\n"
    "  record_every    diagnostics cadence in steps                 [10]\n"
    "  positivity_clip zero negative lobes + renormalise mass       [false]\n"
    "  initial         maxwellian | bimodal | rough-fourier |\n"
    "                  rough-translate | <path.ldnf>                [bimodal]\n"
    "  init_T/init_rho/init_sep  gaussian family parameters\n"
    "  init_r/init_mass          rough-fourier decay offset / mass\n"
    "  init_J/init_l/init_eps    rough-translate ladder\n"
    "  norms           semicolon list of m=..,s=..,l=.. triples     []\n"
    "  exp_moments     semicolon list of a=..,beta=..[,M=..]        []\n"
    "  gevrey          semicolon list of c=..,beta=..,t=..          []\n"
    "  outdir          output directory (required for run)\n"
    "  checkpoints     write checkpoint_<step>.ldnf at every stamp  [false]\n"
    "  deterministic   ordered reductions, reproducible output      [true]\n"
    "  seed            master seed for all randomness               [0]\n"
    "  threads         worker threads for the parallel kernels      [1]\n"
    "  force           allow writing into a non-empty outdir        [false]\n";

// ---- output plumbing -----------------------------------------------------

void ensure_outdir(const std::string& dir, bool force) {
    if (dir.empty()) throw std::invalid_argument("an output directory is required");
    fs::path p(dir);
    if (fs::exists(p)) {
        if (!fs::is_directory(p))
            throw std::invalid_argument("outdir '" + dir + "' is not a directory");
        if (!force && !fs::is_empty(p))
            throw std::invalid_argument("outdir '" + dir +
                                        "' is not empty (use --force or force=1)");
    } else {
        fs::create_directories(p);
    }
}

void write_text(const fs::path& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    os << body;
}

void write_json(const fs::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

json versions_block() {
    return json{{"landau", kVersion}, {"fftw", std::string(fftw_version)}};
}

void write_config_json(const std::string& outdir, const KeyValueConfig& kv) {
    json j;
    j["config"] = json::object();
    for (const auto& [k, v] : kv.kv) j["config"][k] = v;
    j["hash"] = kv.hash();
    j["versions"] = versions_block();
    write_json(fs::path(outdir) / "config.json", j);
}

KeyValueConfig gather_config(const std::string& config_file,
                             const std::vector<std::string>& overrides) {
    KeyValueConfig kv;
    if (!config_file.empty()) kv = parse_config_file(config_file);
    for (const std::string& o : overrides) apply_override(kv, o);
    return kv;
}

json moments_json(const FluidMoments& m) {
    return json{{"rho", m.rho},
                {"u", {m.u[0], m.u[1], m.u[2]}},
                {"T", m.T},
                {"energy", m.energy}};
}

// ---- run -----------------------------------------------------------------

int cmd_run(const KeyValueConfig& kv) {
    RunConfig cfg = make_run_config(kv);
    ensure_outdir(cfg.outdir, cfg.force);
    set_threads(cfg.threads);
    set_deterministic(cfg.deterministic);
    write_config_json(cfg.outdir, kv);

    VelocityGrid g(cfg.dim, cfg.n, cfg.L);
    ScalarField f0 = build_initial_data(cfg);
    CoulombSymbols sym;
    if (cfg.model == Model::landau) sym = build_symbols(g);

    RunOptions opts;
    opts.norm_specs = cfg.norm_specs;
    opts.exp_specs = cfg.exp_specs;
    opts.gevrey_specs = cfg.gevrey_specs;
    opts.config_hash = kv.hash();
    if (cfg.checkpoints) {
        fs::create_directories(fs::path(cfg.outdir) / "checkpoints");
        opts.checkpoint_dir = (fs::path(cfg.outdir) / "checkpoints").string();
    }

    auto t0 = std::chrono::steady_clock::now();
    RunResult rr = run(cfg.model, cfg.model == Model::landau ? &sym : nullptr, f0,
                       cfg.scheme, opts);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();

    write_text(fs::path(cfg.outdir) / "series.csv", rr.record.to_csv());
    write_field((fs::path(cfg.outdir) / "final.ldnf").string(), rr.final_field);

    const auto& pts = rr.record.points;
    json rep;
    rep["hash"] = kv.hash();
    rep["model"] = to_string(cfg.model);
    rep["scheme"] = to_string(cfg.scheme.scheme);
    rep["grid"] = {{"dim", g.dim}, {"n", g.n}, {"L", g.L}};
    rep["steps"] = rr.steps;
    rep["stamps"] = pts.size();
    rep["aborted"] = rr.aborted;
    rep["clipped_mass"] = rr.clipped_mass;
    rep["clip_flagged"] = rr.clip_flagged;
    if (!pts.empty()) {
        const auto& a = pts.front();
        const auto& b = pts.back();
        rep["initial"] = moments_json(a.mom);
        rep["initial"]["entropy"] = a.entropy;
        rep["final"] = moments_json(b.mom);
        rep["final"]["entropy"] = b.entropy;
        double mom_d = 0.0;
        for (int d = 0; d < 3; ++d)
            mom_d = std::max(mom_d, std::abs(b.mom.rho * b.mom.u[d] -
                                             a.mom.rho * a.mom.u[d]));
        rep["drift"] = {
            {"mass_rel",
             a.mom.rho != 0.0 ? std::abs(b.mom.rho - a.mom.rho) / std::abs(a.mom.rho)
                              : 0.0},
            {"momentum_abs", mom_d},
            {"energy_rel", a.mom.energy != 0.0
                               ? std::abs(b.mom.energy - a.mom.energy) /
                                     std::abs(a.mom.energy)
                               : 0.0}};
    }
    write_json(fs::path(cfg.outdir) / "report.json", rep);

    std::printf("%s: %ld steps, %zu stamps, %.1fs -> %s\n",
                to_string(cfg.model).c_str(), rr.steps, pts.size(), wall,
                cfg.outdir.c_str());
    if (rr.aborted) {
        std::fprintf(stderr, "run aborted on non-finite values at step %ld%s%s\n",
                     rr.steps,
                     rr.abort_checkpoint.empty() ? "" : "; last checkpoint ",
                     rr.abort_checkpoint.c_str());
        return 2;
    }
    return 0;
}

// ---- norms ---------------------------------------------------------------

int cmd_norms(const std::string& field_path, const std::vector<std::string>& specs,
              bool dyadic, int nthreads) {
    set_threads(nthreads);
    ScalarField f = read_field(field_path);
    json out = json::array();
    ProjectorBank bank;
    if (dyadic) bank = build_projectors(f.grid, build_partition());
    for (const std::string& s : specs) {
        NormSpec spec = parse_norm_spec(s);
        NormResult d = norm_hmsl_direct(spec, f);
        out.push_back(json{{"spec", {{"m", spec.m}, {"s", spec.s}, {"l", spec.l}}},
                           {"value", d.value},
                           {"method", "direct"},
                           {"truncation_flag", d.truncated}});
        if (dyadic) {
            NormResult y = norm_hmsl_dyadic(bank, spec, f);
            out.push_back(json{{"spec", {{"m", spec.m}, {"s", spec.s}, {"l", spec.l}}},
                               {"value", y.value},
                               {"method", "dyadic"},
                               {"truncation_flag", y.truncated}});
        }
    }
    std::printf("%s\n", out.dump(2).c_str());
    return 0;
}

// ---- rates ---------------------------------------------------------------

json fit_json(const RateFit& f) {
    return json{{"spec", {{"m", f.spec.m}, {"s", f.spec.s}, {"l", f.spec.l}}},
                {"t0", f.t0},
                {"t1", f.t1},
                {"slope", f.slope},
                {"stderr", f.stderr_},
                {"theoretical", f.theoretical},
                {"tolerance", f.tolerance},
                {"samples", f.samples},
                {"pass", f.pass}};
}

int cmd_rates(const std::string& kind, double sobolev_n, double r, double L,
              std::uint64_t seed, LandauRateConfig lc, const std::string& outdir,
              bool force, int nthreads) {
    set_threads(nthreads);
    ensure_outdir(outdir, force);
    KeyValueConfig kv;
    kv.kv["subcommand"] = "rates";
    kv.kv["kind"] = kind;
    kv.kv["seed"] = std::to_string(seed);
    json rep;
    std::string csv;
    if (kind == "heat") {
        kv.kv["sobolev_n"] = std::to_string(sobolev_n);
        kv.kv["r"] = std::to_string(r);
        kv.kv["L"] = std::to_string(L);
        std::vector<RateFit> fits = heat_refinement_study(sobolev_n, r, L, seed);
        rep["kind"] = "heat";
        rep["fits"] = json::array();
        csv = "level,t0,t1,slope,stderr,theoretical,pass\n";
        for (std::size_t i = 0; i < fits.size(); ++i) {
            rep["fits"].push_back(fit_json(fits[i]));
            char line[256];
            std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                          i, fits[i].t0, fits[i].t1, fits[i].slope, fits[i].stderr_,
                          fits[i].theoretical, fits[i].pass ? 1 : 0);
            csv += line;
        }
        // refinement semantics: the converged (finest-level) fit decides; the
        // per-level deviations are reported so drift away from theory under
        // refinement stays visible, but small non-monotone wiggles inside the
        // tolerance band are not failures
        bool monotone = true;
        json diffs = json::array();
        for (std::size_t i = 0; i < fits.size(); ++i) {
            double d = std::abs(fits[i].slope - fits[i].theoretical);
            diffs.push_back(d);
            if (i > 0)
                monotone = monotone &&
                           d <= std::abs(fits[i - 1].slope - fits[i - 1].theoretical);
        }
        bool ok = !fits.empty() && fits.back().pass;
        rep["diffs"] = diffs;
        rep["monotone"] = monotone;
        rep["pass"] = ok;
        std::printf("heat rates: ");
        for (const auto& f : fits)
            std::printf("%.4f (theo %.2f) ", f.slope, f.theoretical);
        std::printf("%s\n", ok ? "pass" : "FAIL");
    } else if (kind == "landau") {
        lc.seed = seed;
        kv.kv["n_grid"] = std::to_string(lc.n_grid);
        kv.kv["L"] = std::to_string(lc.L);
        kv.kv["mass"] = std::to_string(lc.mass);
        kv.kv["window"] = std::to_string(lc.t0) + ":" + std::to_string(lc.t1);
        kv.kv["weight_l"] = std::to_string(lc.weight_l);
        RateFit fit = landau_smoothing_rate(lc);
        rep["kind"] = "landau";
        rep["fit"] = fit_json(fit);
        rep["pass"] = fit.pass;
        char line[256];
        csv = "n_grid,t0,t1,slope,stderr,theoretical,pass\n";
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      lc.n_grid, fit.t0, fit.t1, fit.slope, fit.stderr_,
                      fit.theoretical, fit.pass ? 1 : 0);
        csv += line;
        std::printf("landau rate: slope %.4f +- %.4f (theo %.2f) %s\n", fit.slope,
                    fit.stderr_, fit.theoretical, fit.pass ? "pass" : "FAIL");
    } else {
        throw std::invalid_argument("rates kind must be 'heat' or 'landau'");
    }
    write_config_json(outdir, kv);
    rep["hash"] = kv.hash();
    write_json(fs::path(outdir) / "report.json", rep);
    write_text(fs::path(outdir) / "series.csv", csv);
    return 0;
}

// ---- rough ---------------------------------------------------------------

int cmd_rough(const RoughDataSpec& spec, int n, double L, const std::string& outdir,
              bool force, int nthreads) {
    set_threads(nthreads);
    ensure_outdir(outdir, force);
    VelocityGrid g(1, n, L);
    RoughDataResult rd = rough_data(spec, g);
    KeyValueConfig kv;
    kv.kv["subcommand"] = "rough";
    kv.kv["J"] = std::to_string(spec.J);
    kv.kv["l"] = std::to_string(spec.l);
    kv.kv["eps"] = std::to_string(spec.eps);
    kv.kv["bump_width"] = std::to_string(spec.bump_width);
    kv.kv["n"] = std::to_string(n);
    kv.kv["L"] = std::to_string(L);
    write_config_json(outdir, kv);
    json rep;
    rep["hash"] = kv.hash();
    rep["S"] = rd.S;
    rep["ratios"] = rd.ratios;
    double rmin = HUGE_VAL;
    for (double x : rd.ratios) rmin = std::min(rmin, x);
    rep["min_ratio"] = rmin;
    rep["diverging"] = rmin >= 1.5;
    write_json(fs::path(outdir) / "report.json", rep);
    std::string csv = "j,S,ratio\n";
    for (std::size_t j = 0; j < rd.S.size(); ++j) {
        char line[128];
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", j, rd.S[j],
                      j == 0 ? 0.0 : rd.ratios[j - 1]);
        csv += line;
    }
    write_text(fs::path(outdir) / "series.csv", csv);
    std::printf("besov sums: min ratio %.3f (%s)\n", rmin,
                rmin >= 1.5 ? "diverging" : "NOT diverging");
    return 0;
}

// ---- moments -------------------------------------------------------------

int cmd_moments(const KeyValueConfig& kv, double a, double beta, double t_end) {
    RunConfig cfg = make_run_config(kv);
    if (cfg.model != Model::landau)
        throw std::invalid_argument("moment propagation runs the landau model");
    ensure_outdir(cfg.outdir, cfg.force);
    set_threads(cfg.threads);
    set_deterministic(cfg.deterministic);
    write_config_json(cfg.outdir, kv);
    VelocityGrid g(cfg.dim, cfg.n, cfg.L);
    CoulombSymbols sym = build_symbols(g);
    ScalarField f0 = build_initial_data(cfg);
    MomentPropagationResult mp =
        moment_propagation(sym, f0, a, beta, t_end, cfg.scheme);
    json rep;
    rep["hash"] = kv.hash();
    rep["a"] = a;
    rep["beta"] = beta;
    rep["t_end"] = t_end;
    rep["b_estimate"] = mp.b_estimate;
    rep["initial"] = mp.initial;
    rep["max_ratio"] = mp.max_ratio;
    rep["pass"] = mp.pass;
    write_json(fs::path(cfg.outdir) / "report.json", rep);
    std::string csv = "t,value,envelope\n";
    for (std::size_t i = 0; i < mp.ts.size(); ++i) {
        char line[128];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", mp.ts[i],
                      mp.values[i], 3.0 * mp.initial * (1.0 + mp.ts[i]));
        csv += line;
    }
    write_text(fs::path(cfg.outdir) / "series.csv", csv);
    std::printf("moment propagation: b %.2f, max ratio %.3f, %s\n", mp.b_estimate,
                mp.max_ratio, mp.pass ? "pass" : "FAIL");
    return 0;
}

// ---- relax ---------------------------------------------------------------

int cmd_relax(const KeyValueConfig& kv, double t_end) {
    RunConfig cfg = make_run_config(kv);
    if (cfg.model != Model::landau)
        throw std::invalid_argument("relaxation runs the landau model");
    ensure_outdir(cfg.outdir, cfg.force);
    set_threads(cfg.threads);
    set_deterministic(cfg.deterministic);
    write_config_json(cfg.outdir, kv);
    VelocityGrid g(cfg.dim, cfg.n, cfg.L);
    CoulombSymbols sym = build_symbols(g);
    ScalarField f0 = build_initial_data(cfg);
    RelaxationResult rx = relaxation(sym, f0, t_end, cfg.scheme);
    json rep;
    rep["hash"] = kv.hash();
    rep["t_end"] = t_end;
    rep["final_distance"] = rx.final_distance;
    rep["entropy_monotone"] = rx.entropy_monotone;
    rep["mass_drift"] = rx.mass_drift;
    rep["momentum_drift"] = rx.momentum_drift;
    rep["energy_drift"] = rx.energy_drift;
    write_json(fs::path(cfg.outdir) / "report.json", rep);
    std::string csv = "t,rel_entropy,l2_distance\n";
    for (std::size_t i = 0; i < rx.ts.size(); ++i) {
        char line[128];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", rx.ts[i],
                      rx.rel_entropy[i], rx.l2_distance[i]);
        csv += line;
    }
    write_text(fs::path(cfg.outdir) / "series.csv", csv);
    std::printf("relaxation: H(f|mu) %.3e -> %.3e, |f-mu|/|mu| %.3e, %s\n",
                rx.rel_entropy.front(), rx.rel_entropy.back(), rx.final_distance,
                rx.entropy_monotone ? "entropy monotone" : "entropy NOT monotone");
    return 0;
}

// ---- selftest ------------------------------------------------------------

struct Check {
    std::string name;
    double value;
    double budget;
    bool pass;
};

class Selftest {
  public:
    explicit Selftest(bool fast) : fast_(fast) {}

    // pass when |value| <= budget
    void le(const std::string& name, double value, double budget) {
        add(name, value, budget, std::abs(value) <= budget);
    }
    // pass when value >= budget
    void ge(const std::string& name, double value, double budget) {
        add(name, value, budget, value >= budget);
    }
    void flag(const std::string& name, bool ok) {
        add(name, ok ? 1.0 : 0.0, 1.0, ok);
    }

    void add(const std::string& name, double value, double budget, bool pass) {
        checks_.push_back({name, value, budget, pass});
        std::printf("  %-34s %12.4e  (budget %.2e)  %s\n", name.c_str(), value,
                    budget, pass ? "ok" : "FAIL");
    }

    int failures() const {
        int k = 0;
        for (const auto& c : checks_) k += c.pass ? 0 : 1;
        return k;
    }

    json to_json() const {
        json arr = json::array();
        for (const auto& c : checks_)
            arr.push_back(json{{"name", c.name},
                               {"value", c.value},
                               {"budget", c.budget},
                               {"pass", c.pass}});
        return json{{"fast", fast_}, {"failures", failures()}, {"checks", arr}};
    }

    bool fast_ = false;
    std::vector<Check> checks_;
};

ScalarField compact_bump(const VelocityGrid& g, double radius) {
    ScalarField f(g);
    std::size_t idx = 0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c, ++idx) {
                double x = g.node(a), y = g.node(b), z = g.node(c);
                double r = std::sqrt(x * x + y * y + z * z);
                double t = std::clamp((radius - r) / radius, 0.0, 1.0);
                f.v[idx] = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
            }
    return f;
}

void selftest_transforms(Selftest& st) {
    VelocityGrid g(3, 16, 6.0);
    ScalarField f(g);
    Rng rng(7, "selftest");
    for (auto& x : f.v) x = rng.normal();
    ScalarField back = inverse(forward(f));
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        err = std::max(err, std::abs(back.v[i] - f.v[i]));
    st.le("fft-roundtrip", err, 1e-13);

    double direct = norm_l2(f);
    SpectralField F = forward(f);
    double spec = std::sqrt(std::pow(g.h, 3) / static_cast<double>(f.size()) *
                            spectral_sum_abs2(F));
    st.le("parseval", (spec - direct) / direct, 1e-12);

    VelocityGrid g1(1, 64, 8.0);
    ScalarField h(g1);
    double xi = M_PI * 5 / g1.L;
    for (int i = 0; i < g1.n; ++i) h.v[i] = std::sin(xi * g1.node(i));
    ScalarField dh = derivative(h, 0);
    double derr = 0.0;
    for (int i = 0; i < g1.n; ++i)
        derr = std::max(derr, std::abs(dh.v[i] - xi * std::cos(xi * g1.node(i))));
    st.le("spectral-derivative", derr, 1e-10);
}

void selftest_symbols(Selftest& st) {
    VelocityGrid g(3, 16, 6.0);
    CoulombSymbols sym = build_symbols(g);

    // divergence identity sum_j xi_j A_ij = B_i and trace sum_i A_ii = 8pi/|xi|^2,
    // both relative to the symbol scale at that mode; zero mode excluded
    static const int row[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
    double div_res = 0.0, tr_res = 0.0;
    for_each_mode(g, [&](std::size_t idx, double x, double y, double z, double) {
        double xi2 = x * x + y * y + z * z;
        if (xi2 == 0.0) return;
        double xi[3] = {x, y, z};
        for (int i = 0; i < 3; ++i) {
            double s = 0.0;
            for (int j = 0; j < 3; ++j) s += xi[j] * sym.A_sym[row[i][j]][idx];
            div_res = std::max(div_res, std::abs(s - sym.B_sym_im[i][idx]) *
                                            std::sqrt(xi2) / (8.0 * M_PI));
        }
        double tr = sym.A_sym[0][idx] + sym.A_sym[1][idx] + sym.A_sym[2][idx];
        tr_res = std::max(tr_res,
                          std::abs(tr - 8.0 * M_PI / xi2) * xi2 / (8.0 * M_PI));
    });
    st.le("symbol-divergence", div_res, 1e-10);
    st.le("symbol-trace", tr_res, 1e-10);

    ScalarField f = compact_bump(g, 2.5);
    TensorField spec_conv = conv_a(sym, f);
    TensorField direct = conv_a_direct(f);
    double num = 0.0, den = 0.0;
    for (int c = 0; c < 6; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) {
            double d = spec_conv.comp[c][i] - direct.comp[c][i];
            num += d * d;
            den += direct.comp[c][i] * direct.comp[c][i];
        }
    st.le("conv-a-vs-quadrature", std::sqrt(num / den), 1e-12);
}

void selftest_weak_form(Selftest& st) {
    VelocityGrid g(3, 16, 6.0);
    CoulombSymbols sym = build_symbols(g);
    ScalarField f = make_separated_mixture(g, 11);
    ScalarField one(g), en(g), gauss(g);
    std::size_t idx = 0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b)
            for (int c = 0; c < g.n; ++c, ++idx) {
                double x = g.node(a), y = g.node(b), z = g.node(c);
                one.v[idx] = 1.0;
                en.v[idx] = 0.5 * (x * x + y * y + z * z);
                gauss.v[idx] = std::exp(-0.5 * (x * x + y * y + z * z));
            }
    double scale = integrate(f) * integrate(f);
    st.le("weak-form-mass", weak_form_grid(sym, f, one) / scale, 1e-10);
    // energy needs the analytic gradient (the quadratic is not periodic);
    // every pair term then sits in the kernel null space a(z) z = 0
    std::array<ScalarField, 3> grad_en{coordinate_field(g, 0),
                                       coordinate_field(g, 1),
                                       coordinate_field(g, 2)};
    st.le("weak-form-energy", weak_form_oracle(f, en, &grad_en) / scale, 1e-10);
    double oracle = weak_form_oracle(f, gauss);
    double grid_val = weak_form_grid(sym, f, gauss);
    st.le("weak-form-vs-oracle", (grid_val - oracle) / oracle, 1e-10);

    ScalarField q = q_conservative(sym, f);
    st.le("q-mass-integral", integrate(q) / scale, 1e-12);
}

void selftest_partition(Selftest& st, bool fast) {
    DyadicPartition part = build_partition();
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        double r = 10.0 * i / 10000.0;
        double tot = part.psi(r);
        for (int j = 0; j <= 7; ++j) tot += part.phi(r / std::pow(2.0, j));
        worst = std::max(worst, std::abs(tot - 1.0));
    }
    st.le("partition-residual", worst, 1e-12);
    st.flag("partition-overlap-n0", overlap_constant(part) == 2);

    VelocityGrid g(3, fast ? 16 : 32, 8.0);
    ProjectorBank bank = build_projectors(g, part);
    ScalarField f = make_bimodal(g, 1.0, 1.2, 0.9);
    ScalarField rec(g);
    for (int j = -1; j <= bank.j_max; ++j) {
        ScalarField pj = project_freq(bank, j, f);
        for (std::size_t i = 0; i < g.size(); ++i) rec.v[i] += pj.v[i];
    }
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        err = std::max(err, std::abs(rec.v[i] - f.v[i]));
    st.le("freq-reconstruction", err, 1e-12);

    ScalarField recp(g);
    for (int k = -1; k <= bank.k_max; ++k) {
        ScalarField pk = project_phase(bank, k, f);
        for (std::size_t i = 0; i < g.size(); ++i) recp.v[i] += pk.v[i];
    }
    err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        err = std::max(err, std::abs(recp.v[i] - f.v[i]));
    st.le("phase-reconstruction", err, 1e-12);

    // one-node spike: the direct norm with no multiplier is the closed form
    // |f| <v0>^l h^{3/2}
    ScalarField spike(g);
    int i0 = g.n / 2 + 3, j0 = g.n / 2, k0 = g.n / 2 - 2;
    std::size_t flat = (static_cast<std::size_t>(i0) * g.n + j0) * g.n + k0;
    spike.v[flat] = 1.7;
    double v2 = g.node(i0) * g.node(i0) + g.node(j0) * g.node(j0) +
                g.node(k0) * g.node(k0);
    NormSpec sl{0.0, 0.0, 2.5};
    double expect = 1.7 * std::pow(1.0 + v2, 0.5 * sl.l) * std::pow(g.h, 1.5);
    st.le("norm-spike-exact",
          (norm_hmsl_direct(sl, spike).value - expect) / expect, 1e-12);

    static const NormSpec eq_specs[] = {{0.0, 0.0, 0.0},
                                        {-0.5, 0.0, 3.0},
                                        {-0.5, 1.0, 5.0},
                                        {0.5, 1.0, 3.5},
                                        {2.0, 0.0, -3.0}};
    double worst_c = 1.0;
    for (const NormSpec& spec : eq_specs) {
        double d = norm_hmsl_direct(spec, f).value;
        double y = norm_hmsl_dyadic(bank, spec, f).value;
        worst_c = std::max(worst_c, std::max(y / d, d / y));
    }
    st.le("dyadic-direct-equivalence", worst_c, 10.0);

    double high = 0.0, low = HUGE_VAL;
    for (int j = 0; j <= bank.j_max; ++j) {
        BernsteinRatios br = bernstein_check(bank, j, f);
        if (br.ratio_high == 0.0 && br.ratio_low == 0.0) continue;  // empty shell
        high = std::max(high, br.ratio_high);
        low = std::min(low, br.ratio_low);
    }
    st.le("bernstein-high", high, 3.0);
    st.ge("bernstein-low", low, 1.0 / 3.0);
}

void selftest_diagnostics(Selftest& st) {
    VelocityGrid g(3, 16, 6.0);
    ScalarField mu = maxwellian(g, 1.3, {0.2, -0.1, 0.05}, 1.1);
    FluidMoments m = moments(mu);
    double err = std::abs(m.rho - 1.3) / 1.3 + std::abs(m.u[0] - 0.2) +
                 std::abs(m.u[1] + 0.1) + std::abs(m.u[2] - 0.05) +
                 std::abs(m.T - 1.1) / 1.1;
    st.le("maxwellian-moments", err, 1e-5);
    st.le("rel-entropy-self", relative_entropy(mu, mu), 1e-12);

    double worst = HUGE_VAL;
    for (int s = 0; s < 5; ++s) {
        ScalarField f = make_separated_mixture(g, 40 + s);
        FluidMoments mf = moments(f);
        ScalarField fit = maxwellian(g, mf.rho, mf.u, mf.T);
        worst = std::min(worst, relative_entropy(f, fit));
    }
    st.ge("rel-entropy-nonneg", worst, 0.0);

    // equilibrium dissipation is resolution-limited through the 1/f pair
    // terms (n <= 16 is enforced by the quadratic cost), so it is read on the
    // best-resolved box with the floor under the tail values; generic
    // mixtures sit near 3e-3 on the same normalisation (next check)
    VelocityGrid g5(3, 16, 5.0);
    ScalarField mud = maxwellian(g5, 1.0, {0.0, 0.0, 0.0}, 1.0);
    st.le("dissipation-maxwellian", dissipation(mud, 1e-8), 1e-5);
    ScalarField mu1 = maxwellian(g, 1.0, {0.0, 0.0, 0.0}, 1.0);
    double dworst = HUGE_VAL;
    for (int s = 0; s < 3; ++s) {
        ScalarField f = make_separated_mixture(g, 50 + s);
        dworst = std::min(dworst, dissipation(f) / (integrate(f) * integrate(f)));
    }
    st.ge("dissipation-positive", dworst, -1e-10);

    ScalarField f = make_separated_mixture(g, 17);
    ScalarField f2 = f;
    for (auto& x : f2.v) x *= 2.0;
    st.le("fisher-scaling", (fisher(f2) - 2.0 * fisher(f)) / (2.0 * fisher(f)),
          1e-12);

    // beta = 2 collapses the tail-weight series to exp(a <v>^2), so the norm
    // has a closed form against the plain weighted field
    ExpMomentSpec es{0.2, 2.0, 0, 500};
    ScalarField w = weight_field(g, 1.0);
    ScalarField ge_(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        ge_.v[i] = mu1.v[i] * std::exp(0.5 * es.a * w.v[i] * w.v[i]);
    st.le("exp-moment-analytic",
          (exp_moment_norm(es, mu1) - norm_l2(ge_)) / norm_l2(ge_), 1e-10);
    auto sw = exp_moment_sandwich(ExpMomentSpec{1.0, 1.0, 0, 500}, g);
    st.flag("exp-moment-sandwich", sw[0] <= sw[1]);

    GevreyResult gr = gevrey_norm(GevreySpec{0.0, 1.0, 0.5}, mu1);
    st.le("gevrey-czero", (gr.value - norm_l2(mu1)) / norm_l2(mu1), 1e-13);
}

void selftest_integrator(Selftest& st, bool fast) {
    // heat evolution of a pure mode against the closed form
    VelocityGrid g(3, 16, 8.0);
    ScalarField f(g);
    double xi = M_PI * 3 / g.L;
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k, ++idx)
                f.v[idx] = std::cos(xi * g.node(i)) * std::sin(xi * g.node(j));
    SchemeConfig sc;
    sc.t_end = 0.1;
    sc.dt = 0.002;
    sc.record_every = 1 << 30;
    RunResult rr = run(Model::pure_heat, nullptr, f, sc);
    double fac = std::exp(-2.0 * xi * xi * 0.1);
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        err = std::max(err, std::abs(rr.final_field.v[i] - fac * f.v[i]));
    st.le("heat-exact", err, 1e-8);
    sc.dt = 0.004;
    RunResult r2 = run(Model::pure_heat, nullptr, f, sc);
    double e2 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        e2 = std::max(e2, std::abs(r2.final_field.v[i] - fac * f.v[i]));
    st.ge("rk4-order", std::log2(e2 / err), 3.9);

    // the toy weight cancels exactly on <v>^3 x harmonic data
    VelocityGrid g1(1, 64, 8.0);
    ScalarField h(g1), harm(g1);
    double xi1 = M_PI * 5 / g1.L;
    for (int i = 0; i < g1.n; ++i) {
        double v = g1.node(i);
        harm.v[i] = std::cos(xi1 * v);
        h.v[i] = std::pow(1.0 + v * v, 1.5) * harm.v[i];
    }
    ScalarField r = rhs(Model::toy, nullptr, h);
    double terr = 0.0;
    for (int i = 0; i < g1.n; ++i)
        terr = std::max(terr, std::abs(r.v[i] + xi1 * xi1 * harm.v[i]));
    st.le("toy-weight-cancel", terr, 1e-10);

    // semilinear runaway: the mass ODE bound must catch the abort
    VelocityGrid gb(1, 64, 4.0);
    ScalarField fb(gb);
    for (int i = 0; i < gb.n; ++i)
        fb.v[i] = 2.0 * std::exp(-gb.node(i) * gb.node(i));
    double bound = semilinear_blowup_bound(fb);
    SchemeConfig sb;
    sb.t_end = 1.1 * bound;
    sb.dt = bound / 2000.0;
    sb.record_every = 1 << 30;
    RunResult rb = run(Model::semilinear_heat, nullptr, fb, sb);
    st.flag("semilinear-blowup", rb.aborted && bound > 0.0);

    // short collision run: transported mass, monotone entropy, tame fisher
    VelocityGrid gl(3, fast ? 16 : 24, 7.0);
    CoulombSymbols sym = build_symbols(gl);
    ScalarField f0 = make_separated_mixture(gl, 5);
    SchemeConfig slc;
    slc.t_end = 0.1;
    slc.record_every = 2;
    RunResult rl = run(Model::landau, &sym, f0, slc);
    const auto& pts = rl.record.points;
    double mass_d = 0.0, h_viol = -HUGE_VAL, f_viol = -HUGE_VAL;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        mass_d = std::max(mass_d, std::abs(pts[i].mom.rho - pts[0].mom.rho) /
                                      pts[0].mom.rho);
        h_viol = std::max(h_viol, pts[i].entropy - pts[i - 1].entropy);
        f_viol = std::max(f_viol, (pts[i].fisher - pts[i - 1].fisher) /
                                      pts[i - 1].fisher);
    }
    st.le("landau-mass-drift", mass_d, 1e-12);
    st.le("landau-entropy-monotone", std::max(h_viol, 0.0),
          1e-8 * std::abs(pts[0].entropy));
    if (!fast) st.le("landau-fisher-monotone", std::max(f_viol, 0.0), 1e-3);

    if (!fast) {
        // conservative and non-conservative forms approach under refinement
        double e[2];
        int k = 0;
        for (int n : {16, 32}) {
            VelocityGrid gg(3, n, 7.0);
            CoulombSymbols sy = build_symbols(gg);
            ScalarField ff = make_separated_mixture(gg, 5);
            ScalarField qc = q_conservative(sy, ff);
            ScalarField qn = q_nonconservative(sy, ff);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < gg.size(); ++i) {
                double d = qc.v[i] - qn.v[i];
                num += d * d;
                den += qc.v[i] * qc.v[i];
            }
            e[k++] = std::sqrt(num / den);
        }
        // the forms differ through the sampled-kernel quadrature, whose
        // punctured-node error is O(h^2); measured 1.99 on this pair
        st.ge("q-forms-order", std::log2(e[0] / e[1]), 1.8);

        // collision operator annihilates the equilibrium, faster on refinement
        double rQ[2];
        k = 0;
        for (int n : {16, 32}) {
            VelocityGrid gg(3, n, 8.0);
            CoulombSymbols sy = build_symbols(gg);
            ScalarField mu = maxwellian(gg, 1.0, {0.0, 0.0, 0.0}, 1.0);
            rQ[k++] = norm_l2(q_conservative(sy, mu)) / norm_l2(mu);
        }
        st.ge("equilibrium-annihilation", rQ[0] / rQ[1], 4.0);

        // quadratic form of a*g against gradient fields stays nonnegative
        VelocityGrid gg(3, 16, 6.0);
        CoulombSymbols sy = build_symbols(gg);
        double worst = HUGE_VAL;
        for (int s = 0; s < 5; ++s) {
            ScalarField gf = make_separated_mixture(gg, 60 + s);
            ScalarField Ff = make_rough_fourier(gg, 0.0, 600 + s);
            CoercivityResult cr = coercivity_probe(sy, gf, Ff);
            worst = std::min(worst, cr.lhs / cr.rhs_grad);
        }
        st.ge("coercivity-nonneg", worst, -1e-12);
    }
}

void selftest_determinism(Selftest& st, const std::string& outdir) {
    Rng a(42, "stream"), b(42, "stream");
    bool same = true;
    for (int i = 0; i < 1000; ++i) same = same && a.normal() == b.normal();
    st.flag("rng-reproducible", same);

    VelocityGrid g(3, 16, 6.0);
    ScalarField f1 = make_rough_fourier(g, 0.5, 9);
    ScalarField f2 = make_rough_fourier(g, 0.5, 9);
    st.flag("field-synthesis-reproducible", f1.v == f2.v);

    fs::path tmp = fs::path(outdir) / "roundtrip.ldnf";
    write_field(tmp.string(), f1);
    ScalarField back = read_field(tmp.string());
    st.flag("ldnf-roundtrip", back.grid == f1.grid && back.v == f1.v);
    fs::remove(tmp);

    KeyValueConfig kv1, kv2;
    kv1.kv = {{"n", "32"}, {"seed", "3"}, {"outdir", "a"}, {"threads", "4"}};
    kv2.kv = {{"n", "32"}, {"seed", "3"}, {"outdir", "b"}, {"threads", "1"}};
    st.flag("config-hash-volatile-keys", kv1.hash() == kv2.hash());
    kv2.kv["seed"] = "4";
    st.flag("config-hash-sensitivity", kv1.hash() != kv2.hash());

    TrajectoryRecord rec;
    st.flag("csv-schema-frozen",
            rec.csv_header() == "t,step,rho,ux,uy,uz,T,energy,entropy,fisher,l2");
}

int cmd_selftest(bool fast, const std::string& outdir, bool force, int nthreads) {
    set_threads(nthreads);
    set_deterministic(true);
    ensure_outdir(outdir, force);
    KeyValueConfig kv;
    kv.kv["subcommand"] = "selftest";
    kv.kv["fast"] = fast ? "1" : "0";
    write_config_json(outdir, kv);

    Selftest st(fast);
    std::printf("transforms:\n");
    selftest_transforms(st);
    std::printf("symbols and convolutions:\n");
    selftest_symbols(st);
    std::printf("weak forms:\n");
    selftest_weak_form(st);
    std::printf("partition and norms:\n");
    selftest_partition(st, fast);
    std::printf("diagnostics:\n");
    selftest_diagnostics(st);
    std::printf("integrator:\n");
    selftest_integrator(st, fast);
    std::printf("determinism and io:\n");
    selftest_determinism(st, outdir);

    json rep = st.to_json();
    rep["hash"] = kv.hash();
    write_json(fs::path(outdir) / "report.json", rep);

    // small deterministic trajectory so the directory also exercises the csv path
    VelocityGrid g(1, 64, 8.0);
    ScalarField f0(g);
    for (int i = 0; i < g.n; ++i) f0.v[i] = std::exp(-g.node(i) * g.node(i));
    SchemeConfig sc;
    sc.t_end = 0.05;
    sc.dt = 0.0025;
    sc.record_every = 5;
    RunResult rr = run(Model::toy, nullptr, f0, sc);
    write_text(fs::path(outdir) / "series.csv", rr.record.to_csv());

    int bad = st.failures();
    std::printf("%d checks, %d failures\n", static_cast<int>(st.checks_.size()),
                bad);
    return bad == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral landau-coulomb simulator and diagnostics"};
    app.require_subcommand(1);
    app.footer(kConfigKeyHelp);

    std::string config_file;
    std::vector<std::string> overrides;

    auto add_config_opts = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "key = value config file");
        sub->add_option("set", overrides, "key=value overrides");
    };

    CLI::App* c_run =
        app.add_subcommand("run", "integrate a model and record diagnostics");
    add_config_opts(c_run);

    CLI::App* c_norms =
        app.add_subcommand("norms", "evaluate norm specs on a stored field");
    std::string field_path;
    std::vector<std::string> norm_specs;
    bool dyadic = false;
    int nthreads = 1;
    c_norms->add_option("field", field_path, ".ldnf field file")->required();
    c_norms->add_option("--spec", norm_specs, "norm spec m=..,s=..,l=..")->required();
    c_norms->add_flag("--dyadic", dyadic, "also evaluate the dyadic sum");
    c_norms->add_option("--threads", nthreads, "worker threads");

    CLI::App* c_rates = app.add_subcommand("rates", "smoothing-rate experiments");
    std::string rates_kind = "heat";
    double sobolev_n = 1.0, rate_r = -0.5, rate_L = 8.0;
    std::uint64_t rate_seed = 0;
    LandauRateConfig lrc;
    std::string outdir;
    bool force = false;
    c_rates->add_option("--kind", rates_kind, "heat (closed form) or landau (solver)");
    c_rates->add_option("--sobolev-n", sobolev_n, "measured derivative order");
    c_rates->add_option("--r", rate_r, "data regularity offset");
    c_rates->add_option("--L", rate_L, "box half width (heat kind)");
    c_rates->add_option("--seed", rate_seed, "data seed");
    c_rates->add_option("--n-grid", lrc.n_grid, "landau grid size");
    c_rates->add_option("--landau-L", lrc.L, "landau box half width");
    c_rates->add_option("--mass", lrc.mass, "landau data mass");
    c_rates->add_option("--t0", lrc.t0, "fit window start");
    c_rates->add_option("--t1", lrc.t1, "fit window end");
    c_rates->add_option("--t-end", lrc.t_end, "landau integration end");
    c_rates->add_option("--dt-cap", lrc.dt_cap, "landau step cap");
    c_rates->add_option("--weight-l", lrc.weight_l, "data weight index");
    c_rates->add_option("--outdir", outdir, "output directory")->required();
    c_rates->add_flag("--force", force, "allow non-empty outdir");
    c_rates->add_option("--threads", nthreads, "worker threads");

    CLI::App* c_rough =
        app.add_subcommand("rough", "rough translate data and dyadic partial sums");
    RoughDataSpec rspec;
    int rough_n = 1 << 22;
    double rough_L = 65536.0;
    c_rough->add_option("--J", rspec.J, "translate ladder depth");
    c_rough->add_option("--l", rspec.l, "weight index");
    c_rough->add_option("--eps", rspec.eps, "weight margin");
    c_rough->add_option("--width", rspec.bump_width, "bump half width");
    c_rough->add_option("--n", rough_n, "1d grid size");
    c_rough->add_option("--L", rough_L, "1d half width");
    c_rough->add_option("--outdir", outdir, "output directory")->required();
    c_rough->add_flag("--force", force, "allow non-empty outdir");
    c_rough->add_option("--threads", nthreads, "worker threads");

    CLI::App* c_moments =
        app.add_subcommand("moments", "exponential-moment propagation");
    double mom_a = 0.25, mom_beta = 1.0, mom_tend = 2.0;
    c_moments->add_option("--a", mom_a, "exponential rate a");
    c_moments->add_option("--beta", mom_beta, "stretched exponent beta");
    c_moments->add_option("--t-end", mom_tend, "integration end");
    add_config_opts(c_moments);

    CLI::App* c_relax =
        app.add_subcommand("relax", "relaxation toward the fitted maxwellian");
    double relax_tend = 5.0;
    c_relax->add_option("--t-end", relax_tend, "integration end");
    add_config_opts(c_relax);

    CLI::App* c_selftest =
        app.add_subcommand("selftest", "invariant suite; exit 3 on failure");
    bool fast = false;
    std::string st_outdir = "selftest_out";
    c_selftest->add_flag("--fast", fast, "n=16 grids, reduced suite");
    c_selftest->add_option("--outdir", st_outdir, "output directory");
    c_selftest->add_flag("--force", force, "allow non-empty outdir");
    c_selftest->add_option("--threads", nthreads, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_run) return cmd_run(gather_config(config_file, overrides));
        if (*c_norms) return cmd_norms(field_path, norm_specs, dyadic, nthreads);
        if (*c_rates)
            return cmd_rates(rates_kind, sobolev_n, rate_r, rate_L, rate_seed, lrc,
                             outdir, force, nthreads);
        if (*c_rough)
            return cmd_rough(rspec, rough_n, rough_L, outdir, force, nthreads);
        if (*c_moments)
            return cmd_moments(gather_config(config_file, overrides), mom_a,
                               mom_beta, mom_tend);
        if (*c_relax)
            return cmd_relax(gather_config(config_file, overrides), relax_tend);
        if (*c_selftest) return cmd_selftest(fast, st_outdir, force, nthreads);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
