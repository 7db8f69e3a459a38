#include "landau/grid.hpp"

#include <atomic>
#include <sstream>

namespace landau {

namespace {
std::atomic<int> g_threads{1};
std::atomic<bool> g_deterministic{true};

// Even, >= 8, and 2-3-smooth: covers the power-of-two CI grids as well as the
// n=48/96 rate-experiment grids, while keeping FFT sizes fast and the Nyquist
// index n/2 integral.
bool fft_friendly(int n) {
    if (n < 8 || n % 2 != 0) return false;
    while (n % 2 == 0) n /= 2;
    while (n % 3 == 0) n /= 3;
    return n == 1;
}
} // namespace

void set_threads(int nthreads) { g_threads = nthreads < 1 ? 1 : nthreads; }
int threads() { return g_threads.load(); }
void set_deterministic(bool on) { g_deterministic = on; }
bool deterministic() { return g_deterministic.load(); }

VelocityGrid::VelocityGrid(int dim_, int n_, double L_)
    : dim(dim_), n(n_), L(L_), h(2.0 * L_ / n_) {
    if (dim != 1 && dim != 3)
        throw std::invalid_argument("grid dim must be 1 or 3");
    if (!fft_friendly(n))
        throw std::invalid_argument(
            "grid n must be even, >= 8, with only 2 and 3 as prime factors");
    if (!(L > 0.0))
        throw std::invalid_argument("grid half width must be positive");
}

std::size_t VelocityGrid::size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
    return s;
}

std::size_t VelocityGrid::spec_size() const {
    std::size_t s = static_cast<std::size_t>(n / 2 + 1);
    for (int d = 1; d < dim; ++d) s *= static_cast<std::size_t>(n);
    return s;
}

double integrate(const ScalarField& f) {
    // Kahan sum in fixed order: integrate is the root of every conserved
    // quantity, so keep it bit-stable regardless of the thread setting
    double sum = 0.0, c = 0.0;
    for (double x : f.v) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double hd = 1.0;
    for (int d = 0; d < f.grid.dim; ++d) hd *= f.grid.h;
    return hd * sum;
}

double integrate_weighted(const ScalarField& f, const ScalarField& w) {
    if (!(f.grid == w.grid)) throw std::invalid_argument("grid mismatch");
    double sum = 0.0, c = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        double y = f.v[i] * w.v[i] - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double hd = 1.0;
    for (int d = 0; d < f.grid.dim; ++d) hd *= f.grid.h;
    return hd * sum;
}

double norm_l2(const ScalarField& f) {
    double sum = 0.0, c = 0.0;
    for (double x : f.v) {
        double y = x * x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double hd = 1.0;
    for (int d = 0; d < f.grid.dim; ++d) hd *= f.grid.h;
    return std::sqrt(hd * sum);
}

ScalarField coordinate_field(const VelocityGrid& g, int axis) {
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("bad axis");
    ScalarField out(g);
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) out.v[i] = g.node(i);
        return out;
    }
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k, ++idx) {
                int c = axis == 0 ? i : axis == 1 ? j : k;
                out.v[idx] = g.node(c);
            }
    return out;
}

ScalarField weight_field(const VelocityGrid& g, double l) {
    ScalarField out(g);
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) {
            double v = g.node(i);
            out.v[i] = std::pow(1.0 + v * v, 0.5 * l);
        }
        return out;
    }
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i) {
        double x = g.node(i);
        for (int j = 0; j < g.n; ++j) {
            double y = g.node(j);
            for (int k = 0; k < g.n; ++k, ++idx) {
                double z = g.node(k);
                out.v[idx] = std::pow(1.0 + x * x + y * y + z * z, 0.5 * l);
            }
        }
    }
    return out;
}

std::string grid_describe(const VelocityGrid& g) {
    std::ostringstream os;
    os << "dim=" << g.dim << " n=" << g.n << " L=" << g.L << " h=" << g.h;
    return os.str();
}

} // namespace landau
