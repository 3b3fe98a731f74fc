#include "dicke/ode.hpp"

#include <algorithm>
#include <cmath>

#include "dicke/errors.hpp"
#include "dicke/kernels.hpp"

namespace dicke {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
// y5 - y4 error weights (k7 = f at the new point).
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

} // namespace

DormandPrince::DormandPrince(std::size_t n) : n_(n) {
    for (auto& k : k_) k.resize(n);
    ytmp_.resize(n);
    yerr_.resize(n);
}

OdeStatus DormandPrince::integrate(const OdeRhs& rhs, std::vector<double>& y, double t0,
                                   double t1, const OdeOptions& opt,
                                   const StepObserver* observer) {
    if (y.size() != n_) throw Error("internal", "ode state size mismatch");
    OdeStatus st;
    st.t = t0;
    if (t1 <= t0) {
        st.reached_end = true;
        return st;
    }

    const double span = t1 - t0;
    const double hmax = opt.h_max > 0.0 ? opt.h_max : span;
    double* k1 = k_[0].data();
    double* k2 = k_[1].data();
    double* k3 = k_[2].data();
    double* k4 = k_[3].data();
    double* k5 = k_[4].data();
    double* k6 = k_[5].data();
    double* k7 = k_[6].data();

    rhs(t0, y.data(), k1);
    st.n_rhs++;

    double h = opt.h_init;
    if (h <= 0.0) {
        // crude first guess from the RHS magnitude, refined by the controller
        double ny = kernels::error_norm(y.data(), y.data(), y.data(), opt.atol, opt.rtol,
                                        n_);
        double nf = kernels::error_norm(k1, y.data(), y.data(), opt.atol, opt.rtol, n_);
        h = (nf > 1e-300) ? 0.01 * ny / nf : 1e-6;
        h = std::clamp(h, 1e-8, hmax);
        if (!(h > 0.0) || !std::isfinite(h)) h = 1e-6;
    }
    h = std::min(h, hmax);

    double err_prev = 1e-4;
    const double safety = 0.9, min_fac = 0.2, max_fac = 6.0;
    const double k_i = 0.7 / 5.0, k_p = 0.4 / 5.0;  // PI controller exponents

    while (st.t < t1) {
        if (st.n_steps + st.n_rejected >= opt.max_steps)
            throw Error("no-convergence", "ODE step budget exhausted");
        h = std::min(h, t1 - st.t);
        if (h < 1e-14 * std::max(1.0, std::fabs(st.t))) {
            st.step_underflow = true;
            return st;
        }
        const double t = st.t;
        const double* yb = y.data();

        {
            const double* ks[] = {k1};
            const double cf[] = {A21};
            kernels::rk_combine(ytmp_.data(), yb, h, ks, cf, 1, n_);
            rhs(t + C2 * h, ytmp_.data(), k2);
        }
        {
            const double* ks[] = {k1, k2};
            const double cf[] = {A31, A32};
            kernels::rk_combine(ytmp_.data(), yb, h, ks, cf, 2, n_);
            rhs(t + C3 * h, ytmp_.data(), k3);
        }
        {
            const double* ks[] = {k1, k2, k3};
            const double cf[] = {A41, A42, A43};
            kernels::rk_combine(ytmp_.data(), yb, h, ks, cf, 3, n_);
            rhs(t + C4 * h, ytmp_.data(), k4);
        }
        {
            const double* ks[] = {k1, k2, k3, k4};
            const double cf[] = {A51, A52, A53, A54};
            kernels::rk_combine(ytmp_.data(), yb, h, ks, cf, 4, n_);
            rhs(t + C5 * h, ytmp_.data(), k5);
        }
        {
            const double* ks[] = {k1, k2, k3, k4, k5};
            const double cf[] = {A61, A62, A63, A64, A65};
            kernels::rk_combine(ytmp_.data(), yb, h, ks, cf, 5, n_);
            rhs(t + h, ytmp_.data(), k6);
        }
        {
            const double* ks[] = {k1, k3, k4, k5, k6};
            const double cf[] = {B1, B3, B4, B5, B6};
            kernels::rk_combine(ytmp_.data(), yb, h, ks, cf, 5, n_);
            rhs(t + h, ytmp_.data(), k7);
        }
        st.n_rhs += 6;

        {
            const double* ks[] = {k1, k3, k4, k5, k6, k7};
            const double cf[] = {E1, E3, E4, E5, E6, E7};
            std::fill(yerr_.begin(), yerr_.end(), 0.0);
            kernels::rk_combine(yerr_.data(), yerr_.data(), h, ks, cf, 6, n_);
        }
        double err = kernels::error_norm(yerr_.data(), y.data(), ytmp_.data(), opt.atol,
                                         opt.rtol, n_);
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            st.t += h;
            std::swap(y, ytmp_);
            std::swap(k_[0], k_[6]);  // FSAL
            k1 = k_[0].data();
            k2 = k_[1].data();
            k3 = k_[2].data();
            k4 = k_[3].data();
            k5 = k_[4].data();
            k6 = k_[5].data();
            k7 = k_[6].data();
            st.n_steps++;
            if (observer) {
                StepAction act = (*observer)(st.t, h, y);
                if (act == StepAction::Stop) return st;
                if (act == StepAction::ContinueModified) {
                    rhs(st.t, y.data(), k1);
                    st.n_rhs++;
                }
            }
            double fac = safety * std::pow(err > 1e-300 ? err : 1e-300, -k_i) *
                         std::pow(err_prev, k_p);
            fac = std::clamp(fac, min_fac, max_fac);
            h = std::min(h * fac, hmax);
            err_prev = std::max(err, 1e-4);
        } else {
            st.n_rejected++;
            double fac = std::clamp(safety * std::pow(err, -0.2), min_fac, 1.0);
            h *= fac;
        }
    }
    st.h_last = h;
    st.reached_end = st.t >= t1;
    return st;
}

} // namespace dicke
