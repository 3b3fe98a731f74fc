#include "dicke/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dicke {
namespace kernels {

// Below this size the OpenMP fork/join costs more than the loop.
static constexpr std::size_t PAR_CUTOFF = 16384;

Exec resolve(Exec e) {
#ifdef _OPENMP
    if (e == Exec::Auto) return omp_in_parallel() ? Exec::Serial : Exec::Parallel;
    return e;
#else
    (void)e;
    return Exec::Serial;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

void axpy(cdouble a, const cdouble* x, cdouble* y, std::size_t n, Exec e) {
    if (resolve(e) == Exec::Parallel && n >= PAR_CUTOFF) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) y[i] += a * x[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
    }
}

void scal(cdouble a, cdouble* x, std::size_t n, Exec e) {
    if (resolve(e) == Exec::Parallel && n >= PAR_CUTOFF) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) x[i] *= a;
    } else {
        for (std::size_t i = 0; i < n; ++i) x[i] *= a;
    }
}

cdouble dot(const cdouble* x, const cdouble* y, std::size_t n, Exec e) {
    double re = 0.0, im = 0.0;
    if (resolve(e) == Exec::Parallel && n >= PAR_CUTOFF) {
#pragma omp parallel for schedule(static) reduction(+ : re, im)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            cdouble t = std::conj(x[i]) * y[i];
            re += t.real();
            im += t.imag();
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            cdouble t = std::conj(x[i]) * y[i];
            re += t.real();
            im += t.imag();
        }
    }
    return {re, im};
}

double nrm2(const cdouble* x, std::size_t n, Exec e) {
    double s = 0.0;
    if (resolve(e) == Exec::Parallel && n >= PAR_CUTOFF) {
#pragma omp parallel for schedule(static) reduction(+ : s)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) s += std::norm(x[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
    }
    return std::sqrt(s);
}

void rk_combine(double* y, const double* base, double h, const double* const* stages,
                const double* coeff, int n_stages, std::size_t n, Exec e) {
    if (resolve(e) == Exec::Parallel && n >= PAR_CUTOFF) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            double acc = 0.0;
            for (int j = 0; j < n_stages; ++j) acc += coeff[j] * stages[j][i];
            y[i] = base[i] + h * acc;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n_stages; ++j) acc += coeff[j] * stages[j][i];
            y[i] = base[i] + h * acc;
        }
    }
}

double error_norm(const double* err, const double* y0, const double* y1, double atol,
                  double rtol, std::size_t n, Exec e) {
    double s = 0.0;
    if (resolve(e) == Exec::Parallel && n >= PAR_CUTOFF) {
#pragma omp parallel for schedule(static) reduction(+ : s)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            double w = atol + rtol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
            double q = err[i] / w;
            s += q * q;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double w = atol + rtol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
            double q = err[i] / w;
            s += q * q;
        }
    }
    return std::sqrt(s / static_cast<double>(n));
}

} // namespace kernels
} // namespace dicke
