#include "landau/diagnostics.hpp"

#include "landau/fft.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace landau {

namespace {
double hd(const VelocityGrid& g) {
    double x = 1.0;
    for (int d = 0; d < g.dim; ++d) x *= g.h;
    return x;
}

double kahan_sum(const std::vector<double>& xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}
} // namespace

FluidMoments moments(const ScalarField& f) {
    const VelocityGrid& g = f.grid;
    double m0 = integrate(f);
    if (!(m0 > 0.0)) throw std::invalid_argument("moments need positive mass");
    FluidMoments out;
    out.rho = m0;
    std::vector<double> buf(g.size());
    for (int a = 0; a < g.dim; ++a) {
        ScalarField va = coordinate_field(g, a);
        for (std::size_t i = 0; i < g.size(); ++i) buf[i] = va.v[i] * f.v[i];
        out.u[a] = hd(g) * kahan_sum(buf) / m0;
    }
    double e2 = 0.0;
    {
        std::vector<double> q(g.size(), 0.0);
        std::vector<double> e(g.size(), 0.0);
        for (int a = 0; a < g.dim; ++a) {
            ScalarField va = coordinate_field(g, a);
            for (std::size_t i = 0; i < g.size(); ++i) {
                double dv = va.v[i] - out.u[a];
                q[i] += dv * dv * f.v[i];
                e[i] += va.v[i] * va.v[i] * f.v[i];
            }
        }
        out.T = hd(g) * kahan_sum(q) / (g.dim * m0);
        e2 = hd(g) * kahan_sum(e);
    }
    out.energy = 0.5 * e2;
    return out;
}

ScalarField maxwellian(const VelocityGrid& g, double rho,
                       const std::array<double, 3>& u, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("maxwellian needs T > 0");
    if (rho < 0.0) throw std::invalid_argument("maxwellian needs rho >= 0");
    ScalarField out(g);
    double norm = rho * std::pow(2.0 * M_PI * T, -0.5 * g.dim);
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) {
            double d = g.node(i) - u[0];
            out.v[i] = norm * std::exp(-d * d / (2.0 * T));
        }
        return out;
    }
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i) {
        double dx = g.node(i) - u[0];
        for (int j = 0; j < g.n; ++j) {
            double dy = g.node(j) - u[1];
            for (int k = 0; k < g.n; ++k, ++idx) {
                double dz = g.node(k) - u[2];
                out.v[idx] =
                    norm * std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * T));
            }
        }
    }
    return out;
}

double relative_entropy(const ScalarField& f, const ScalarField& mu) {
    if (!(f.grid == mu.grid)) throw std::invalid_argument("grid mismatch");
    std::vector<double> buf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        double fi = f.v[i], mi = mu.v[i];
        if (fi <= 0.0) {
            buf[i] = mi;  // limit of x log(x/m) - x + m as x -> 0+
        } else {
            buf[i] = fi * std::log(fi / mi) - fi + mi;
        }
    }
    return hd(f.grid) * kahan_sum(buf);
}

double entropy(const ScalarField& f) {
    std::vector<double> buf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        double fi = f.v[i];
        buf[i] = fi > 0.0 ? fi * std::log(fi) : 0.0;
    }
    return hd(f.grid) * kahan_sum(buf);
}

double dissipation(const ScalarField& f, double floor_rel) {
    const VelocityGrid& g = f.grid;
    if (g.dim != 3) throw std::invalid_argument("dissipation sum needs dim 3");
    if (g.n > 16)
        throw std::invalid_argument("dissipation sum is O(N^6); capped at n = 16");
    double fmax = 0.0;
    for (double x : f.v) fmax = std::max(fmax, x);
    if (!(fmax > 0.0)) throw std::invalid_argument("dissipation needs positive f");
    const double floor = floor_rel * fmax;

    SpectralField F = forward(f);
    std::array<ScalarField, 3> gf{ScalarField(g), ScalarField(g), ScalarField(g)};
    for (int a = 0; a < 3; ++a) gf[a] = inverse(spectral_derivative(F, a));

    const std::size_t N = g.size();
    std::vector<double> gof(3 * N);
    for (int a = 0; a < 3; ++a)
        for (std::size_t i = 0; i < N; ++i)
            gof[a * N + i] = gf[a].v[i] / std::max(f.v[i], floor);

    const int n = g.n;
    double total = 0.0;
    for (int vi = 0; vi < n; ++vi)
        for (int vj = 0; vj < n; ++vj)
            for (int vk = 0; vk < n; ++vk) {
                std::size_t v = (static_cast<std::size_t>(vi) * n + vj) * n + vk;
                double fv = std::max(f.v[v], 0.0);
                if (fv == 0.0) continue;
                double bv0 = gof[0 * N + v], bv1 = gof[1 * N + v], bv2 = gof[2 * N + v];
                double row = 0.0;
                std::size_t w = 0;
                for (int wi = 0; wi < n; ++wi) {
                    double zx = g.h * (vi - wi);
                    for (int wj = 0; wj < n; ++wj) {
                        double zy = g.h * (vj - wj);
                        for (int wk = 0; wk < n; ++wk, ++w) {
                            if (w == v) continue;
                            double zz = g.h * (vk - wk);
                            double b0 = bv0 - gof[0 * N + w];
                            double b1 = bv1 - gof[1 * N + w];
                            double b2 = bv2 - gof[2 * N + w];
                            double r2 = zx * zx + zy * zy + zz * zz;
                            double bb = b0 * b0 + b1 * b1 + b2 * b2;
                            double bz = b0 * zx + b1 * zy + b2 * zz;
                            row += (bb - bz * bz / r2) / std::sqrt(r2) *
                                   std::max(f.v[w], 0.0);
                        }
                    }
                }
                total += row * fv;
            }
    const double h3 = g.h * g.h * g.h;
    return 0.5 * h3 * h3 * total;
}

double fisher(const ScalarField& f) {
    const VelocityGrid& g = f.grid;
    double fmax = 0.0;
    for (double x : f.v) fmax = std::max(fmax, x);
    if (!(fmax > 0.0)) return 0.0;
    const double floor = 1e-30 * fmax;
    SpectralField F = forward(f);
    std::vector<double> buf(g.size(), 0.0);
    for (int a = 0; a < g.dim; ++a) {
        ScalarField d = inverse(spectral_derivative(F, a));
        for (std::size_t i = 0; i < g.size(); ++i) buf[i] += d.v[i] * d.v[i];
    }
    for (std::size_t i = 0; i < g.size(); ++i)
        buf[i] /= 4.0 * std::max(f.v[i], floor);
    return hd(g) * kahan_sum(buf);
}

namespace {
// log of the series G^2(y) = sum_{l>=M} exp((2l/b) log a + 2l log y - (2/b) lgamma(l+1))
double log_G2(double log_vbr, const ExpMomentSpec& spec,
              const std::vector<double>& lgam) {
    const double la = std::log(spec.a);
    std::vector<double> terms;
    terms.reserve(64);
    double m = -1e300;
    double partial = 0.0;  // in linear space relative to running max, rebuilt lazily
    for (int l = spec.M; l <= spec.max_terms; ++l) {
        double t = (2.0 * l / spec.beta) * la + 2.0 * l * log_vbr -
                   (2.0 / spec.beta) * lgam[l];
        terms.push_back(t);
        if (t > m) m = t;
        // termination: term < 1e-16 * partial sum (compare in log space
        // against the running max as a proxy once past the peak)
        if (l > spec.M + 2 && t < m + std::log(1e-16) &&
            t < terms[terms.size() - 2])
            break;
    }
    for (double t : terms) partial += std::exp(t - m);
    return m + std::log(partial);
}
} // namespace

double exp_moment_norm(const ExpMomentSpec& spec, const ScalarField& f) {
    if (!(spec.a > 0.0) || !(spec.beta > 0.0) || spec.beta > 2.0)
        throw std::invalid_argument("exp moment spec needs a > 0, beta in (0,2]");
    const VelocityGrid& g = f.grid;
    std::vector<double> lgam(spec.max_terms + 1);
    for (int l = 0; l <= spec.max_terms; ++l) lgam[l] = std::lgamma(l + 1.0);
    ScalarField w = weight_field(g, 1.0);  // <v>
    // scaled accumulation: track max log contribution to avoid overflow
    std::vector<double> logc(g.size(), -1e300);
    double m = -1e300;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (f.v[i] == 0.0) continue;
        double lg2 = log_G2(std::log(w.v[i]), spec, lgam);
        logc[i] = 2.0 * std::log(std::abs(f.v[i])) + lg2;
        m = std::max(m, logc[i]);
    }
    if (m == -1e300) return 0.0;
    double s = 0.0;
    for (double lc : logc)
        if (lc > -1e300) s += std::exp(lc - m);
    double logv = 0.5 * (m + std::log(s) + std::log(hd(g)));
    return logv > 708.0 ? HUGE_VAL : std::exp(logv);
}

std::array<double, 2> exp_moment_sandwich(const ExpMomentSpec& spec,
                                          const VelocityGrid& g, double c_b) {
    std::vector<double> lgam(spec.max_terms + 1);
    for (int l = 0; l <= spec.max_terms; ++l) lgam[l] = std::lgamma(l + 1.0);
    double vmax = std::sqrt(1.0 + g.dim * g.L * g.L);
    // upper bound needs C >= G e^{-c a <v>^b}; lower bound needs C <= G e^{-c a/2 <v>^b}
    double c_min = 0.0, c_max = HUGE_VAL;
    const int samples = 256;
    for (int i = 0; i <= samples; ++i) {
        double vb = 1.0 + (vmax - 1.0) * i / samples;
        double logG = 0.5 * log_G2(std::log(vb), spec, lgam);
        c_min = std::max(c_min, std::exp(logG - c_b * spec.a * std::pow(vb, spec.beta)));
        c_max = std::min(c_max,
                         std::exp(logG - 0.5 * c_b * spec.a * std::pow(vb, spec.beta)));
    }
    return {c_min, c_max};
}

double gevrey_phi(double t) {
    if (t >= 1.0) return 1.0;
    if (t <= 0.0) throw std::invalid_argument("gevrey time must be positive");
    return std::min(t / std::abs(std::log(t)), 1.0);
}

GevreyResult gevrey_norm(const GevreySpec& spec, const ScalarField& f) {
    const VelocityGrid& g = f.grid;
    double phi = gevrey_phi(spec.t);
    double expo = spec.beta / (spec.beta + 3.0);
    SpectralField F = forward(f);
    GevreyResult r;
    double sum = 0.0;
    bool over = false;
    for_each_mode(g, [&](std::size_t i, double x, double y, double z, double w) {
        double xi2 = x * x + y * y + z * z;
        double le = spec.c * std::pow(phi * xi2, expo);
        double e = std::norm(F.c[i]);
        if (e > 0.0 && 2.0 * le + std::log(e) > 700.0) over = true;
        sum += w * std::exp(2.0 * le) * e;
    });
    double scale = hd(g) / static_cast<double>(g.size());
    r.value = std::sqrt(scale * sum);
    r.diverged = over || !std::isfinite(r.value);
    return r;
}

std::string TrajectoryRecord::csv_header() const {
    std::ostringstream os;
    os << "t,step,rho,ux,uy,uz,T,energy,entropy,fisher,l2";
    for (std::size_t i = 0; i < norm_specs.size(); ++i) os << ",norm_" << i;
    for (std::size_t i = 0; i < exp_specs.size(); ++i) os << ",exp_" << i;
    for (std::size_t i = 0; i < gevrey_specs.size(); ++i) os << ",gevrey_" << i;
    return os.str();
}

namespace {
void put(std::ostringstream& os, double x) {
    char buf[32];
    snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
}
} // namespace

std::string TrajectoryRecord::csv_row(const TrajectoryPoint& p) const {
    std::ostringstream os;
    put(os, p.t);
    os << "," << p.step << ",";
    put(os, p.mom.rho); os << ",";
    put(os, p.mom.u[0]); os << ",";
    put(os, p.mom.u[1]); os << ",";
    put(os, p.mom.u[2]); os << ",";
    put(os, p.mom.T); os << ",";
    put(os, p.mom.energy); os << ",";
    put(os, p.entropy); os << ",";
    put(os, p.fisher); os << ",";
    put(os, p.l2);
    for (double v : p.norm_values) { os << ","; put(os, v); }
    for (double v : p.exp_moment_values) { os << ","; put(os, v); }
    for (double v : p.gevrey_values) { os << ","; put(os, v); }
    return os.str();
}

std::string TrajectoryRecord::to_csv() const {
    std::ostringstream os;
    os << csv_header() << "\n";
    for (const auto& p : points) os << csv_row(p) << "\n";
    return os.str();
}

} // namespace landau
