// Serial vs OpenMP timing for the hot kernels: CSR superoperator matvec,
// one Lindblad RHS sweep, and the Wigner grid transform.

#include <chrono>
#include <cstdio>
#include <random>

#include "dicke/kernels.hpp"
#include "dicke/operators.hpp"
#include "dicke/subspace_dm.hpp"
#include "dicke/wigner.hpp"

using namespace dicke;

namespace {

double now_ms() {
    using clk = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clk::now().time_since_epoch()).count();
}

template <class F>
double time_best_ms(F&& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_ms();
        fn();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", kernels::max_threads());
    std::printf("%-34s %12s %12s %8s\n", "kernel", "serial [ms]", "omp [ms]", "speedup");

    ModelParams p;
    p.n_atoms = 12;
    SpinSubspace sub(12, 12);
    OperatorSet ops = build_operators(sub, 28);
    CsrMatrix lv = subspace_liouvillian(p, ops);
    const std::size_t n = static_cast<std::size_t>(lv.rows);

    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cdouble> x(n), y(n);
    for (auto& v : x) v = cdouble(g(rng), g(rng));

    {
        double ts = time_best_ms([&] { lv.apply(x.data(), y.data(), Exec::Serial); }, 5);
        double tp = time_best_ms([&] { lv.apply(x.data(), y.data(), Exec::Parallel); }, 5);
        std::printf("%-34s %12.3f %12.3f %8.2f\n", "liouvillian matvec", ts, tp, ts / tp);
    }
    {
        double ts = time_best_ms([&] { kernels::axpy({0.3, 0.1}, x.data(), y.data(), n,
                                                     Exec::Serial); }, 5);
        double tp = time_best_ms([&] { kernels::axpy({0.3, 0.1}, x.data(), y.data(), n,
                                                     Exec::Parallel); }, 5);
        std::printf("%-34s %12.3f %12.3f %8.2f\n", "axpy", ts, tp, ts / tp);
    }
    {
        DensityMatrix dm;
        dm.sub = sub;
        dm.n_max = 28;
        dm.rho = Eigen::MatrixXcd::Zero(ops.dim, ops.dim);
        dm.rho(0, 0) = 0.6;
        dm.rho(5, 5) = 0.4;
        Eigen::MatrixXcd ph = reduce_photon(dm);
        WignerGridSpec spec;
        double ts = time_best_ms([&] { wigner_photon(ph, spec, Exec::Serial); }, 3);
        double tp = time_best_ms([&] { wigner_photon(ph, spec, Exec::Parallel); }, 3);
        std::printf("%-34s %12.3f %12.3f %8.2f\n", "wigner grid 161x161", ts, tp, ts / tp);
    }
    return 0;
}
