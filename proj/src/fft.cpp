#include "landau/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace landau {

std::size_t BoxShape::real_size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
    return s;
}

std::size_t BoxShape::spec_size() const {
    std::size_t s = static_cast<std::size_t>(n / 2 + 1);
    for (int d = 1; d < dim; ++d) s *= static_cast<std::size_t>(n);
    return s;
}

namespace {

// One plan pair per box shape, with owned aligned buffers; callers copy
// through them.  Copies are cheap next to the transforms at our sizes and
// keep FFTW's alignment requirements out of the public API.
struct PlanPair {
    int dim = 0, n = 0;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t rs = 0, ss = 0;

    PlanPair(int dim_, int n_) : dim(dim_), n(n_) {
        BoxShape s{dim, n};
        rs = s.real_size();
        ss = s.spec_size();
        real = fftw_alloc_real(rs);
        spec = fftw_alloc_complex(ss);
        if (dim == 1) {
            fwd = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
        } else {
            fwd = fftw_plan_dft_r2c_3d(n, n, n, real, spec, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_3d(n, n, n, spec, real, FFTW_ESTIMATE);
        }
    }
    ~PlanPair() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
};

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, PlanPair*>& plan_cache() {
    static std::map<std::pair<int, int>, PlanPair*> cache;
    return cache;
}

PlanPair& get_plans(int dim, int n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(dim, n);
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, new PlanPair(dim, n)).first;
    return *it->second;
}

} // namespace

void forward_box(const BoxShape& s, const double* in, std::complex<double>* out) {
    PlanPair& p = get_plans(s.dim, s.n);
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    std::memcpy(p.real, in, p.rs * sizeof(double));
    fftw_execute(p.fwd);
    std::memcpy(out, p.spec, p.ss * sizeof(fftw_complex));
}

void inverse_box(const BoxShape& s, const std::complex<double>* in, double* out) {
    PlanPair& p = get_plans(s.dim, s.n);
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    std::memcpy(p.spec, in, p.ss * sizeof(fftw_complex));
    fftw_execute(p.bwd);
    const double scale = 1.0 / static_cast<double>(p.rs);
    for (std::size_t i = 0; i < p.rs; ++i) out[i] = p.real[i] * scale;
}

SpectralField forward(const ScalarField& f) {
    SpectralField F(f.grid);
    forward_box(BoxShape{f.grid.dim, f.grid.n}, f.v.data(), F.c.data());
    return F;
}

ScalarField inverse(const SpectralField& F) {
    ScalarField f(F.grid);
    inverse_box(BoxShape{F.grid.dim, F.grid.n}, F.c.data(), f.v.data());
    return f;
}

SpectralField spectral_derivative(const SpectralField& F, int axis) {
    const VelocityGrid& g = F.grid;
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("bad axis");
    SpectralField out(g);
    const std::complex<double> I(0.0, 1.0);
    if (g.dim == 1) {
        for (int k = 0; k < g.nz_half(); ++k)
            out.c[k] = I * g.xid(k) * F.c[k];
        return out;
    }
    const int n = g.n, nh = g.nz_half();
    std::size_t idx = 0;
    for (int kx = 0; kx < n; ++kx)
        for (int ky = 0; ky < n; ++ky)
            for (int kz = 0; kz < nh; ++kz, ++idx) {
                int k = axis == 0 ? kx : axis == 1 ? ky : kz;
                out.c[idx] = I * g.xid(k) * F.c[idx];
            }
    return out;
}

ScalarField derivative(const ScalarField& f, int axis) {
    return inverse(spectral_derivative(forward(f), axis));
}

double spectral_sum_abs2(const SpectralField& F) {
    double sum = 0.0, c = 0.0;
    for_each_mode(F.grid, [&](std::size_t i, double, double, double, double w) {
        double y = w * std::norm(F.c[i]) - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    });
    return sum;
}

} // namespace landau
