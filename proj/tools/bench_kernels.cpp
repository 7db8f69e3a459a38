// times the OpenMP assembly kernels against the serial reference path on the
// full collision operator and checks the two agree bitwise (same elementwise
// order of operations, so any difference is a bug, not rounding).
#include "landau/experiments.hpp"
#include "landau/operator.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>

using namespace landau;

namespace {

double time_q(const CoulombSymbols& sym, const ScalarField& f, int reps,
              ScalarField& out) {
    using clock = std::chrono::steady_clock;
    out = q_conservative(sym, f);  // warm the fft plans
    auto t0 = clock::now();
    for (int i = 0; i < reps; ++i) out = q_conservative(sym, f);
    return std::chrono::duration<double>(clock::now() - t0).count() / reps;
}

} // namespace

int main(int argc, char** argv) {
    int n = 32, reps = 3, nthreads = 0;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--n") && i + 1 < argc) n = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--reps") && i + 1 < argc)
            reps = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--threads") && i + 1 < argc)
            nthreads = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: %s [--n N] [--reps R] [--threads T]\n",
                         argv[0]);
            return 1;
        }
    }
    if (nthreads > 0) set_threads(nthreads);

    VelocityGrid g(3, n, 8.0);
    CoulombSymbols sym = build_symbols(g);
    ScalarField f = make_bimodal(g);

    ScalarField qs, qp;
    set_serial_reference(true);
    double ts = time_q(sym, f, reps, qs);
    set_serial_reference(false);
    double tp = time_q(sym, f, reps, qp);

    bool identical = qs.v == qp.v;
    std::printf("n=%d threads=%d reps=%d\n", n, threads(), reps);
    std::printf("  serial reference  %8.3f ms\n", 1e3 * ts);
    std::printf("  openmp kernels    %8.3f ms   speedup %.2fx\n", 1e3 * tp,
                ts / tp);
    std::printf("  bitwise agreement %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
