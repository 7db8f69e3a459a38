#include "landau/operator.hpp"

#include "landau/ops.hpp"

#include <atomic>
#include <cmath>

namespace landau {

namespace {
constexpr double kEightPi = 8.0 * M_PI;
std::atomic<bool> g_serial{false};

// symmetric-tensor component indices of row i: A_i. = (comp[i][0..2])
constexpr int kRow[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};

struct PaddedSpectrum {
    BoxShape pad;
    std::vector<std::complex<double>> hat;
};

PaddedSpectrum pad_forward(const CoulombSymbols& sym, const ScalarField& f) {
    PaddedSpectrum ps{sym.pad, {}};
    std::vector<double> buf(sym.pad.real_size());
    ops::pad3(f.v.data(), f.grid.n, buf.data(), sym.pad.n);
    ps.hat.resize(sym.pad.spec_size());
    forward_box(sym.pad, buf.data(), ps.hat.data());
    return ps;
}

// inverse transform of a padded spectrum, cropped to the main box
ScalarField pad_inverse_crop(const VelocityGrid& g, const BoxShape& pad,
                             const std::vector<std::complex<double>>& hat) {
    std::vector<double> buf(pad.real_size());
    inverse_box(pad, hat.data(), buf.data());
    ScalarField out(g);
    ops::crop3(buf.data(), pad.n, out.v.data(), g.n);
    return out;
}

TensorField conv_a_tables(const VelocityGrid& g, const BoxShape& pad,
                          const std::array<std::vector<double>, 6>& tables,
                          const PaddedSpectrum& ps) {
    TensorField T(g);
    std::vector<std::complex<double>> tmp(pad.spec_size());
    std::vector<double> buf(pad.real_size());
    for (int c = 0; c < 6; ++c) {
        ops::spec_mul(tables[c].data(), ps.hat.data(), tmp.data(), tmp.size());
        inverse_box(pad, tmp.data(), buf.data());
        ops::crop3(buf.data(), pad.n, T.comp[c].data(), g.n);
    }
    return T;
}

std::array<ScalarField, 3> spectral_gradient(const ScalarField& f);

// B_i = sum_j a_ij * d_j f where d_j f is the main-grid spectral gradient,
// zero-padded like any other field.  Keeping the gradient on the main grid is
// what lets the weak-form double sum telescope onto the flux exactly.
std::array<ScalarField, 3> conv_b_tables(const VelocityGrid& g, const BoxShape& pad,
                                         const std::array<std::vector<double>, 6>& tables,
                                         const std::array<PaddedSpectrum, 3>& gps) {
    std::array<ScalarField, 3> B{ScalarField(g), ScalarField(g), ScalarField(g)};
    std::vector<std::complex<double>> acc(pad.spec_size());
    std::vector<double> buf(pad.real_size());
    for (int i = 0; i < 3; ++i) {
        std::fill(acc.begin(), acc.end(), std::complex<double>(0.0));
        for (int j = 0; j < 3; ++j)
            ops::spec_mul_add(tables[kRow[i][j]].data(), gps[j].hat.data(),
                              acc.data(), acc.size());
        inverse_box(pad, acc.data(), buf.data());
        ops::crop3(buf.data(), pad.n, B[i].v.data(), g.n);
    }
    return B;
}

std::array<ScalarField, 3> spectral_gradient(const ScalarField& f) {
    SpectralField F = forward(f);
    std::array<ScalarField, 3> gf{ScalarField(f.grid), ScalarField(f.grid),
                                  ScalarField(f.grid)};
    for (int a = 0; a < f.grid.dim; ++a)
        gf[a] = inverse(spectral_derivative(F, a));
    return gf;
}

std::array<PaddedSpectrum, 3> pad_gradient(const CoulombSymbols& sym,
                                           const std::array<ScalarField, 3>& gf) {
    return {pad_forward(sym, gf[0]), pad_forward(sym, gf[1]),
            pad_forward(sym, gf[2])};
}

ScalarField spectral_divergence(const std::array<ScalarField, 3>& flux) {
    const VelocityGrid& g = flux[0].grid;
    SpectralField acc(g);
    for (int a = 0; a < g.dim; ++a) {
        SpectralField Fa = spectral_derivative(forward(flux[a]), a);
        for (std::size_t i = 0; i < acc.c.size(); ++i) acc.c[i] += Fa.c[i];
    }
    return inverse(acc);
}

ScalarField q_flux_form(const VelocityGrid& g, const TensorField& A,
                        const std::array<ScalarField, 3>& B,
                        const std::array<ScalarField, 3>& gh,
                        const ScalarField& h) {
    std::array<ScalarField, 3> flux{ScalarField(g), ScalarField(g), ScalarField(g)};
    for (int i = 0; i < 3; ++i)
        ops::flux_assemble(A.comp[kRow[i][0]].data(), A.comp[kRow[i][1]].data(),
                           A.comp[kRow[i][2]].data(), gh[0].v.data(),
                           gh[1].v.data(), gh[2].v.data(), B[i].v.data(),
                           h.v.data(), flux[i].v.data(), g.size());
    return spectral_divergence(flux);
}

void require_grid(const CoulombSymbols& sym, const ScalarField& f) {
    if (!(sym.grid == f.grid))
        throw std::invalid_argument("symbols built for a different grid");
}
} // namespace

void set_serial_reference(bool on) { g_serial = on; }
bool serial_reference() { return g_serial.load(); }

TensorField conv_a(const CoulombSymbols& sym, const ScalarField& f) {
    require_grid(sym, f);
    return conv_a_tables(sym.grid, sym.pad, sym.A_pad, pad_forward(sym, f));
}

std::array<ScalarField, 3> conv_b(const CoulombSymbols& sym, const ScalarField& f) {
    require_grid(sym, f);
    return conv_b_tables(sym.grid, sym.pad, sym.A_pad,
                         pad_gradient(sym, spectral_gradient(f)));
}

ScalarField q_conservative(const CoulombSymbols& sym, const ScalarField& f) {
    require_grid(sym, f);
    TensorField A = conv_a_tables(sym.grid, sym.pad, sym.A_pad, pad_forward(sym, f));
    std::array<ScalarField, 3> gf = spectral_gradient(f);
    std::array<ScalarField, 3> B =
        conv_b_tables(sym.grid, sym.pad, sym.A_pad, pad_gradient(sym, gf));
    ScalarField Q = q_flux_form(sym.grid, A, B, gf, f);
    for (double x : Q.v)
        if (!std::isfinite(x))
            throw std::runtime_error("collision operator produced non-finite flux");
    return Q;
}

ScalarField q_nonconservative(const CoulombSymbols& sym, const ScalarField& f) {
    require_grid(sym, f);
    TensorField A = conv_a(sym, f);
    SpectralField F = forward(f);
    ScalarField out(f.grid);
    static const int ii[6] = {0, 1, 2, 0, 0, 1};
    static const int jj[6] = {0, 1, 2, 1, 2, 2};
    for (int c = 0; c < 6; ++c) {
        SpectralField D = spectral_derivative(spectral_derivative(F, ii[c]), jj[c]);
        ScalarField d = inverse(D);
        double mult = c < 3 ? 1.0 : 2.0;
        for (std::size_t i = 0; i < out.v.size(); ++i)
            out.v[i] += mult * A.comp[c][i] * d.v[i];
    }
    for (std::size_t i = 0; i < out.v.size(); ++i)
        out.v[i] += kEightPi * f.v[i] * f.v[i];
    return out;
}

ScalarField q_truncated(const CoulombSymbols& sym, const TruncatedKernelBank& bank,
                        int k, const ScalarField& g, const ScalarField& h) {
    require_grid(sym, g);
    require_grid(sym, h);
    if (!bank.in_range(k))
        throw std::out_of_range("kernel bank shell out of range");
    const auto& tables = bank.A_k[k - bank.k_min];
    TensorField A = conv_a_tables(sym.grid, sym.pad, tables, pad_forward(sym, g));
    std::array<ScalarField, 3> B = conv_b_tables(
        sym.grid, sym.pad, tables, pad_gradient(sym, spectral_gradient(g)));
    std::array<ScalarField, 3> gh = spectral_gradient(h);
    return q_flux_form(sym.grid, A, B, gh, h);
}

namespace {
template <class Kernel>
TensorField conv_direct_impl(const ScalarField& f, Kernel&& ker) {
    const VelocityGrid& g = f.grid;
    if (g.dim != 3) throw std::invalid_argument("direct convolution needs dim 3");
    if (g.n > 16)
        throw std::invalid_argument("direct convolution is O(N^6); capped at n = 16");
    TensorField T(g);
    const int n = g.n;
    const double h3 = g.h * g.h * g.h;
#pragma omp parallel for schedule(static) if (threads() > 1)
    for (int vi = 0; vi < n; ++vi) {
        for (int vj = 0; vj < n; ++vj)
            for (int vk = 0; vk < n; ++vk) {
                double acc[6] = {};
                std::size_t w = 0;
                for (int wi = 0; wi < n; ++wi) {
                    double zx = g.h * (vi - wi);
                    for (int wj = 0; wj < n; ++wj) {
                        double zy = g.h * (vj - wj);
                        for (int wk = 0; wk < n; ++wk, ++w) {
                            double zz = g.h * (vk - wk);
                            double fw = f.v[w];
                            for (int c = 0; c < 6; ++c)
                                acc[c] += ker(c, zx, zy, zz) * fw;
                        }
                    }
                }
                std::size_t idx = (static_cast<std::size_t>(vi) * n + vj) * n + vk;
                for (int c = 0; c < 6; ++c) T.comp[c][idx] = h3 * acc[c];
            }
    }
    return T;
}
} // namespace

TensorField conv_a_direct(const ScalarField& f) {
    return conv_direct_impl(f, [](int c, double x, double y, double z) {
        return kernel_a(c, x, y, z);
    });
}

TensorField conv_a_direct_shell(const TruncatedKernelBank& bank, int k,
                                const ScalarField& f) {
    if (!bank.in_range(k))
        throw std::out_of_range("kernel bank shell out of range");
    return conv_direct_impl(f, [k](int c, double x, double y, double z) {
        return kernel_a_shell(k, c, x, y, z);
    });
}

double weak_form_oracle(const ScalarField& f, const ScalarField& phi,
                        const std::array<ScalarField, 3>* grad_phi) {
    const VelocityGrid& g = f.grid;
    if (g.dim != 3) throw std::invalid_argument("weak form oracle needs dim 3");
    if (g.n > 16)
        throw std::invalid_argument("weak form oracle is O(N^6); capped at n = 16");
    double fmax = 0.0, fmin = f.v[0];
    for (double x : f.v) {
        fmax = std::max(fmax, x);
        fmin = std::min(fmin, x);
    }
    if (fmin <= 0.0)
        throw std::invalid_argument("weak form oracle needs strictly positive f");
    const double floor = 1e-30 * fmax;

    std::array<ScalarField, 3> gf = spectral_gradient(f);
    std::array<ScalarField, 3> gp = grad_phi ? *grad_phi : spectral_gradient(phi);

    const std::size_t N = g.size();
    std::vector<double> gof(3 * N);
    for (int a = 0; a < 3; ++a)
        for (std::size_t i = 0; i < N; ++i)
            gof[a * N + i] = gf[a].v[i] / std::max(f.v[i], floor);

    const int n = g.n;
    double total = 0.0;
    // v-major double loop, skipping the diagonal; the bracket contracts the
    // kernel on both sides
    for (int vi = 0; vi < n; ++vi)
        for (int vj = 0; vj < n; ++vj)
            for (int vk = 0; vk < n; ++vk) {
                std::size_t v = (static_cast<std::size_t>(vi) * n + vj) * n + vk;
                double fv = f.v[v];
                double brv[3] = {gof[0 * N + v], gof[1 * N + v], gof[2 * N + v]};
                double cpv[3] = {gp[0].v[v], gp[1].v[v], gp[2].v[v]};
                double row = 0.0;
                std::size_t w = 0;
                for (int wi = 0; wi < n; ++wi) {
                    double zx = g.h * (vi - wi);
                    for (int wj = 0; wj < n; ++wj) {
                        double zy = g.h * (vj - wj);
                        for (int wk = 0; wk < n; ++wk, ++w) {
                            if (w == v) continue;
                            double zz = g.h * (vk - wk);
                            double br[3] = {brv[0] - gof[0 * N + w],
                                            brv[1] - gof[1 * N + w],
                                            brv[2] - gof[2 * N + w]};
                            double cp[3] = {cpv[0] - gp[0].v[w],
                                            cpv[1] - gp[1].v[w],
                                            cpv[2] - gp[2].v[w]};
                            double r2 = zx * zx + zy * zy + zz * zz;
                            double r = std::sqrt(r2);
                            double bdz = br[0] * zx + br[1] * zy + br[2] * zz;
                            double cdz = cp[0] * zx + cp[1] * zy + cp[2] * zz;
                            double bc = br[0] * cp[0] + br[1] * cp[1] + br[2] * cp[2];
                            // a(z) . br x cp = (br.cp - (br.z)(cp.z)/|z|^2)/|z|
                            row += (bc - bdz * cdz / r2) / r * f.v[w];
                        }
                    }
                }
                total += row * fv;
            }
    const double h3 = g.h * g.h * g.h;
    return -0.5 * h3 * h3 * total;
}

double weak_form_grid(const CoulombSymbols& sym, const ScalarField& f,
                      const ScalarField& phi) {
    require_grid(sym, f);
    TensorField A = conv_a_tables(sym.grid, sym.pad, sym.A_pad, pad_forward(sym, f));
    std::array<ScalarField, 3> gf = spectral_gradient(f);
    std::array<ScalarField, 3> B =
        conv_b_tables(sym.grid, sym.pad, sym.A_pad, pad_gradient(sym, gf));
    std::array<ScalarField, 3> gp = spectral_gradient(phi);
    const VelocityGrid& g = sym.grid;
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (int r = 0; r < 3; ++r) {
            double flux = A.comp[kRow[r][0]][i] * gf[0].v[i] +
                          A.comp[kRow[r][1]][i] * gf[1].v[i] +
                          A.comp[kRow[r][2]][i] * gf[2].v[i] - B[r].v[i] * f.v[i];
            acc += flux * gp[r].v[i];
        }
        double y = -acc - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum * g.h * g.h * g.h;
}

CoercivityResult coercivity_probe(const CoulombSymbols& sym, const ScalarField& g,
                                  const ScalarField& F) {
    require_grid(sym, g);
    require_grid(sym, F);
    if (!(integrate(g) > 0.0))
        throw std::invalid_argument("coercivity probe needs positive-mass g");
    TensorField A = conv_a(sym, g);
    std::array<ScalarField, 3> gF = spectral_gradient(F);
    const VelocityGrid& gr = sym.grid;
    ScalarField w = weight_field(gr, -3.0);
    ScalarField vx = coordinate_field(gr, 0);
    ScalarField vy = coordinate_field(gr, 1);
    ScalarField vz = coordinate_field(gr, 2);
    double lhs = 0.0, rg = 0.0, rs = 0.0;
    for (std::size_t i = 0; i < gr.size(); ++i) {
        double gx = gF[0].v[i], gy = gF[1].v[i], gz = gF[2].v[i];
        lhs += A.comp[0][i] * gx * gx + A.comp[1][i] * gy * gy +
               A.comp[2][i] * gz * gz +
               2.0 * (A.comp[3][i] * gx * gy + A.comp[4][i] * gx * gz +
                      A.comp[5][i] * gy * gz);
        rg += w.v[i] * (gx * gx + gy * gy + gz * gz);
        double cx = vy.v[i] * gz - vz.v[i] * gy;
        double cy = vz.v[i] * gx - vx.v[i] * gz;
        double cz = vx.v[i] * gy - vy.v[i] * gx;
        rs += w.v[i] * (cx * cx + cy * cy + cz * cz);
    }
    const double h3 = gr.h * gr.h * gr.h;
    return {h3 * lhs, h3 * rg, h3 * rs};
}

} // namespace landau
