#include "dicke/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "dicke/ode.hpp"

namespace dicke {

double MF1State::spin_norm() const { return std::sqrt(sx * sx + sy * sy + sz * sz); }

MF1State mf1_rhs(const MF1State& s, const ModelParams& p, const PerturbationSpec& pert) {
    const double gp = p.g_scaled();
    const double gt = pert.gamma_tilde();
    const double gd = pert.gamma_down();
    const cdouble iu(0.0, 1.0);
    MF1State d;
    d.a = -(iu * p.omega_c + 0.5 * p.kappa) * s.a - iu * 2.0 * gp * s.sx;
    d.sx = -2.0 * p.omega_0 * s.sy - gt * s.sx;
    d.sy = 2.0 * p.omega_0 * s.sx - 4.0 * gp * s.sz * s.a.real() - gt * s.sy;
    d.sz = 4.0 * gp * s.sy * s.a.real() - gd * (s.sz + 0.5 * p.n_atoms);
    return d;
}

MF2State mf2_rhs(const MF2State& s, const ModelParams& p, const PerturbationSpec& pert) {
    const double gp = p.g_scaled();
    const double gt = pert.gamma_tilde();
    const double gd = pert.gamma_down();
    const double w0 = p.omega_0, wc = p.omega_c, kap = p.kappa;
    const double n = p.n_atoms;
    const double fr = (n - 1.0) / n;
    const cdouble iu(0.0, 1.0);

    MF2State d;
    // first moments; <a Sz> closes as <a><Sz>, <a Sy> is tracked
    d.a = -(iu * wc + 0.5 * kap) * s.a - iu * 2.0 * gp * s.sx;
    d.sx = -2.0 * w0 * s.sy - gt * s.sx;
    d.sy = 2.0 * w0 * s.sx - 4.0 * gp * s.sz * s.a.real() - gt * s.sy;
    d.sz = 4.0 * gp * s.a_sy.real() - gd * (s.sz + 0.5 * n);

    d.ada = -kap * s.ada - 4.0 * gp * s.a_sx.imag();
    d.aa = -(2.0 * iu * wc + kap) * s.aa - iu * 4.0 * gp * s.a_sx;
    d.a_sx = -(iu * wc + 0.5 * kap + gt) * s.a_sx - 2.0 * w0 * s.a_sy - iu * 2.0 * gp * s.sx2;
    d.a_sy = -(iu * wc + 0.5 * kap + gt) * s.a_sy + 2.0 * w0 * s.a_sx -
             2.0 * gp * s.sz * (s.aa + s.ada) - iu * 2.0 * gp * (s.sxsy - iu * s.sz);

    // real part of 2(2<SxSy> - i<Sz>); the imaginary part vanishes on the
    // tracked manifold Im<SxSy> = <Sz>/2
    const double rot = 4.0 * s.sxsy.real();
    d.sx2 = -w0 * rot - gt * (2.0 * s.sx2 - 0.5 * n);
    d.sy2 = w0 * rot - 8.0 * gp * fr * s.sz * s.a_sy.real() - gt * (2.0 * s.sy2 - 0.5 * n);
    d.sz2 = 8.0 * gp * fr * s.sz * s.a_sy.real() - gd * (2.0 * s.sz2 - 0.5 * n + (n - 1.0) * s.sz);
    d.sxsy = 2.0 * w0 * (s.sx2 - s.sy2) - 4.0 * gp * fr * s.sz * s.a_sx.real() +
             iu * 2.0 * gp * s.a_sy.real() - gt * (2.0 * s.sxsy - iu * s.sz) -
             iu * 0.5 * gd * (s.sz + 0.5 * n);
    return d;
}

MF2State init_dicke_state(const SpinSubspace& sub) {
    const double s = sub.spin();
    MF2State st;
    st.sz = -s;
    st.sz2 = s * s;
    st.sx2 = 0.5 * s;
    st.sy2 = 0.5 * s;
    st.sxsy = cdouble(0.0, -0.5 * s);
    return st;
}

MF1State init_mf1_state(const SpinSubspace& sub, const ModelParams& p) {
    const double s = sub.spin();
    MF1State st;
    st.sz = -s;
    st.sx = 1e-3 * s;
    const cdouble iu(0.0, 1.0);
    st.a = -iu * 2.0 * p.g_scaled() * st.sx / (iu * p.omega_c + 0.5 * p.kappa);
    return st;
}

namespace {

constexpr int MF1_DIM = 5;
constexpr int MF2_DIM = 17;

void pack(const MF2State& s, MfOrder order, double* y) {
    y[0] = s.a.real();
    y[1] = s.a.imag();
    y[2] = s.sx;
    y[3] = s.sy;
    y[4] = s.sz;
    if (order == MfOrder::MF1) return;
    y[5] = s.ada;
    y[6] = s.aa.real();
    y[7] = s.aa.imag();
    y[8] = s.a_sx.real();
    y[9] = s.a_sx.imag();
    y[10] = s.a_sy.real();
    y[11] = s.a_sy.imag();
    y[12] = s.sx2;
    y[13] = s.sy2;
    y[14] = s.sz2;
    y[15] = s.sxsy.real();
    y[16] = s.sxsy.imag();
}

MF2State unpack(const double* y, MfOrder order) {
    MF2State s;
    s.a = cdouble(y[0], y[1]);
    s.sx = y[2];
    s.sy = y[3];
    s.sz = y[4];
    if (order == MfOrder::MF1) return s;
    s.ada = y[5];
    s.aa = cdouble(y[6], y[7]);
    s.a_sx = cdouble(y[8], y[9]);
    s.a_sy = cdouble(y[10], y[11]);
    s.sx2 = y[12];
    s.sy2 = y[13];
    s.sz2 = y[14];
    s.sxsy = cdouble(y[15], y[16]);
    return s;
}

} // namespace

MfSteadyResult integrate_to_steady(MfOrder order, const MF2State& init, const ModelParams& p,
                                   const PerturbationSpec& pert, const MfSteadyOptions& opt) {
    p.validate();
    pert.validate();
    const int dim = order == MfOrder::MF1 ? MF1_DIM : MF2_DIM;
    const double n2 = 0.5 * p.n_atoms;

    // per-component magnitude floors so near-zero moments do not dominate
    // the relative window test
    double floors[MF2_DIM];
    const double fa = 1e-9 * std::sqrt(std::max(1.0, n2));
    const double f1 = 1e-9 * std::max(1.0, n2);
    const double f2 = 1e-9 * std::max(1.0, n2 * n2);
    const double fm = 1e-9 * std::max(1.0, std::pow(n2, 1.5));
    double tmpf[MF2_DIM] = {fa, fa, f1, f1, f1, f1, f1, f1, fm, fm, fm, fm, f2, f2, f2, f2, f2};
    std::copy(tmpf, tmpf + MF2_DIM, floors);

    std::vector<double> y(dim);
    pack(init, order, y.data());

    OdeRhs rhs = [&](double, const double* yy, double* dy) {
        MF2State s = unpack(yy, order);
        if (order == MfOrder::MF1) {
            MF1State s1{s.a, s.sx, s.sy, s.sz};
            MF1State d = mf1_rhs(s1, p, pert);
            dy[0] = d.a.real();
            dy[1] = d.a.imag();
            dy[2] = d.sx;
            dy[3] = d.sy;
            dy[4] = d.sz;
        } else {
            MF2State d = mf2_rhs(s, p, pert);
            pack(d, order, dy);
        }
    };

    const double blowup = 1e9 * std::max(1.0, n2 * n2);
    std::deque<std::pair<double, std::vector<double>>> history;
    MfSteadyResult result;
    double next_sample = 0.0;
    std::vector<double> rhswork(dim);
    std::deque<double> recent_deltas;

    StepObserver obs = [&](double t, double, std::vector<double>& yy) {
        for (double v : yy)
            if (!std::isfinite(v) || std::fabs(v) > blowup)
                throw Error("diverged", "mean-field state blew up at t = " + std::to_string(t));
        if (t + 1e-12 < next_sample) return StepAction::Continue;
        next_sample = t + opt.sample_dt;
        history.emplace_back(t, yy);
        while (history.size() > 2 && history.front().first < t - opt.window - opt.sample_dt)
            history.pop_front();

        // quick exit when the flow itself has died
        rhs(t, yy.data(), rhswork.data());
        double rhsrel = 0.0;
        for (int i = 0; i < dim; ++i)
            rhsrel = std::max(rhsrel, std::fabs(rhswork[i]) / std::max(std::fabs(yy[i]), floors[i]));
        if (rhsrel <= 1e-11) {
            result.converged = true;
            result.elapsed = t;
            result.window_delta = 0.0;
            return StepAction::Stop;
        }

        if (history.front().first <= t - opt.window + 1e-9) {
            const auto& old = history.front().second;
            double delta = 0.0;
            for (int i = 0; i < dim; ++i)
                delta = std::max(delta, std::fabs(yy[i] - old[i]) /
                                            std::max(std::fabs(yy[i]), floors[i]));
            result.window_delta = delta;
            recent_deltas.push_back(delta);
            if (recent_deltas.size() > 40) recent_deltas.pop_front();
            if (delta <= opt.tol_ss) {
                result.converged = true;
                result.elapsed = t;
                return StepAction::Stop;
            }
        }
        return StepAction::Continue;
    };

    OdeOptions oopt;
    oopt.rtol = opt.rtol;
    oopt.atol = opt.atol;
    DormandPrince rk(static_cast<std::size_t>(dim));
    OdeStatus st = rk.integrate(rhs, y, 0.0, opt.max_time, oopt, &obs);

    if (!result.converged) {
        result.elapsed = st.t;
        // bounded, non-decaying window deltas read as a limit cycle
        if (recent_deltas.size() >= 20) {
            double lo = *std::min_element(recent_deltas.begin(), recent_deltas.end());
            double hi = *std::max_element(recent_deltas.begin(), recent_deltas.end());
            if (lo > opt.tol_ss && hi < 2.0 * lo) result.limit_cycle = true;
        }
    }
    result.state = unpack(y.data(), order);
    return result;
}

double total_spin_from_moments_mf2(const MF2State& s, int n_atoms) {
    double s2 = s.sx2 + s.sy2 + s.sz2;
    double est = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * std::max(0.0, s2)));
    return est / (0.5 * n_atoms);
}

double total_spin_from_moments_mf1(const MF1State& s, int n_atoms) {
    double s2 = s.sx * s.sx + s.sy * s.sy + s.sz * s.sz;
    double est = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * s2));
    return est / (0.5 * n_atoms);
}

SubspaceMoments mf2_subspace_moments(const ModelParams& p, const SpinSubspace& sub,
                                     const MfSteadyOptions& opt) {
    MfSteadyResult r =
        integrate_to_steady(MfOrder::MF2, init_dicke_state(sub), p, PerturbationSpec{0.0, 1.0}, opt);
    SubspaceMoments m;
    m.two_s = sub.two_s;
    m.n_atoms = sub.n_atoms;
    m.sz_mean = r.state.sz;
    m.sz2_mean = r.state.sz2;
    m.photon_mean = r.state.ada;
    m.method = "mf2";
    m.converged = r.converged;
    m.residual = r.window_delta;
    m.fock_cutoff_used = 0;
    m.clamp_to_cone(1e-6);
    return m;
}

} // namespace dicke
