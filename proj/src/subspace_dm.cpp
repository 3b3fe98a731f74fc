#include "dicke/subspace_dm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dicke/arnoldi.hpp"
#include "dicke/ode.hpp"

namespace dicke {

namespace {

// Parity sector of the vectorized generator. The weak Z2 symmetry
// exp(i pi (a^dag a + Sz + S)) commutes with the unperturbed generator and
// the steady state reached from |S,-S,0> lies in the even sector, which has
// half the dimension; the couplings never leave it.
struct SectorMap {
    int d = 0;
    std::vector<int> to_full;
    std::vector<int> from_full;
};

int site_parity(int idx, int nf) { return ((idx / nf) + (idx % nf)) & 1; }

SectorMap even_sector(int spin_dim, int nf) {
    SectorMap sm;
    sm.d = spin_dim * nf;
    sm.from_full.assign(static_cast<std::size_t>(sm.d) * sm.d, -1);
    for (int j = 0; j < sm.d; ++j)
        for (int i = 0; i < sm.d; ++i)
            if (site_parity(i, nf) == site_parity(j, nf)) {
                sm.from_full[static_cast<std::size_t>(i) + static_cast<std::size_t>(sm.d) * j] =
                    static_cast<int>(sm.to_full.size());
                sm.to_full.push_back(i + sm.d * j);
            }
    return sm;
}

CsrMatrix restrict_to_sector(const CsrMatrix& lv, const SectorMap& sm) {
    Triplets t(static_cast<int>(sm.to_full.size()), static_cast<int>(sm.to_full.size()));
    for (std::size_t r = 0; r < sm.to_full.size(); ++r) {
        int fr = sm.to_full[r];
        for (std::int64_t k = lv.row_ptr[fr]; k < lv.row_ptr[fr + 1]; ++k) {
            int cs = sm.from_full[lv.col[k]];
            if (cs >= 0) t.add(static_cast<int>(r), cs, lv.val[k]);
        }
    }
    return t.build();
}

Eigen::MatrixXcd vec_to_rho(const std::vector<cdouble>& x, int d) {
    return Eigen::Map<const Eigen::MatrixXcd>(x.data(), d, d);
}

void hermitize_and_normalize(Eigen::MatrixXcd& rho) {
    rho = 0.5 * (rho + rho.adjoint()).eval();
    cdouble tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw Error("no-convergence", "steady-state trace collapsed");
    rho /= tr;
}

double residual_of(const CsrMatrix& lv_full, const Eigen::MatrixXcd& rho,
                   std::vector<cdouble>& work) {
    const int d = static_cast<int>(rho.rows());
    work.resize(static_cast<std::size_t>(d) * d);
    lv_full.apply(rho.data(), work.data());
    return kernels::nrm2(work.data(), work.size());
}

std::vector<cdouble> initial_state_vec(const SpinSubspace& sub, int nf) {
    const int d = sub.dimension() * nf;
    std::vector<cdouble> v(static_cast<std::size_t>(d) * d, cdouble(0, 0));
    // |S, M=-S> (x) |0> is product index 0 in M-major ordering
    v[0] = cdouble(1.0, 0.0);
    return v;
}

struct SolveOut {
    Eigen::MatrixXcd rho;
    double residual = 0.0;
    std::string solver;
    long n_rhs = 0;
};

SolveOut solve_dense_null(const CsrMatrix& lv_full, const SectorMap& sm, int d) {
    const int ds = static_cast<int>(sm.to_full.size());
    CsrMatrix lsec = restrict_to_sector(lv_full, sm);
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(ds, ds);
    for (int r = 0; r < ds; ++r)
        for (std::int64_t k = lsec.row_ptr[r]; k < lsec.row_ptr[r + 1]; ++k)
            dense(r, lsec.col[k]) += lsec.val[k];

    // All eigenvalues satisfy Re(lambda) <= 0, so a small positive shift is
    // never in the spectrum; two inverse-iteration sweeps single out the
    // nearest eigenvalue, which is the zero mode.
    const double sigma = 1e-8 * std::max(1.0, lv_full.norm_inf());
    dense.diagonal().array() -= sigma;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(dense);

    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(ds);
    for (int r = 0; r < ds; ++r) {
        int full = sm.to_full[r];
        if (full % d == full / d) x(r) = 1.0;  // maximally mixed start: has trace
    }
    x.normalize();
    for (int it = 0; it < 3; ++it) {
        x = lu.solve(x);
        x.normalize();
    }

    SolveOut out;
    std::vector<cdouble> fullvec(static_cast<std::size_t>(d) * d, cdouble(0, 0));
    for (int r = 0; r < ds; ++r) fullvec[sm.to_full[r]] = x(r);
    out.rho = vec_to_rho(fullvec, d);
    hermitize_and_normalize(out.rho);
    std::vector<cdouble> work;
    out.residual = residual_of(lv_full, out.rho, work);
    out.solver = "dense-null";
    return out;
}

SolveOut solve_arnoldi(const CsrMatrix& lv_full, const CsrMatrix& h,
                       const std::vector<JumpOperator>& jumps, int d,
                       const SteadyStateOptions& opt) {
    std::vector<cdouble> start(static_cast<std::size_t>(d) * d, cdouble(0, 0));
    for (int i = 0; i < d; ++i) start[i + static_cast<std::size_t>(d) * i] = 1.0 / d;

    SlowSpectrumOptions sopt;
    sopt.n_wanted = 1;
    sopt.subspace_dim = 72;
    sopt.max_cycles = 10;
    sopt.tol = 0.5 * opt.tol_residual;
    sopt.seed = opt.seed;

    auto [h_eff, k_op] = split_lindblad(h, jumps);
    double h_scale = h_eff.cwiseAbs().maxCoeff();
    JumpFilteredExpander expander(h_eff, std::move(k_op), 1e-6 * (1.0 + h_scale));
    LinearOp op = [&expander](const cdouble* in, cdouble* out) { expander(in, out); };
    SlowSpectrumResult res = slow_spectrum_subspace(lv_full, op, sopt, &start);

    if (res.pairs.empty() || (!res.pairs.front().converged &&
                              res.pairs.front().residual > 100 * opt.tol_residual)) {
        // assumption-free fallback: exponential-filter Krylov
        sopt.subspace_dim = 96;
        sopt.max_cycles = 40;
        const std::vector<cdouble>* warm =
            res.pairs.empty() ? &start : &res.pairs.front().vec;
        res = slow_spectrum_filtered(lv_full, 0.0, sopt, warm);
    }
    if (res.pairs.empty()) throw Error("no-convergence", "no steady-state candidate found");
    const RitzPair& p = res.pairs.front();
    if (!p.converged && p.residual > 100 * opt.tol_residual)
        throw Error("no-convergence", "steady-state residual stalled at " +
                                          std::to_string(p.residual));

    SolveOut out;
    out.rho = vec_to_rho(p.vec, d);
    hermitize_and_normalize(out.rho);
    std::vector<cdouble> work;
    out.residual = residual_of(lv_full, out.rho, work);
    out.n_rhs = res.n_rhs + res.n_matvec;
    out.solver = "arnoldi";
    return out;
}

SolveOut solve_integrate(const CsrMatrix& lv_full, const SpinSubspace& sub, int nf, int d,
                         const SteadyStateOptions& opt) {
    std::vector<cdouble> v = initial_state_vec(sub, nf);
    std::vector<double> y(reinterpret_cast<double*>(v.data()),
                          reinterpret_cast<double*>(v.data()) + 2 * v.size());

    DormandPrince rk(y.size());
    OdeOptions oopt;
    oopt.rtol = 1e-10;
    oopt.atol = 1e-13;

    OdeRhs rhs = [&lv_full](double, const double* yy, double* dy) {
        lv_full.apply(reinterpret_cast<const cdouble*>(yy), reinterpret_cast<cdouble*>(dy));
    };

    double last_check = 0.0;
    double residual = 1e300;
    std::vector<cdouble> work;
    StepObserver obs = [&](double t, double, std::vector<double>& yy) {
        auto* c = reinterpret_cast<cdouble*>(yy.data());
        Eigen::Map<Eigen::MatrixXcd> rho(c, d, d);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        if (t - last_check >= 1.0) {
            last_check = t;
            work.resize(static_cast<std::size_t>(d) * d);
            lv_full.apply(c, work.data());
            residual = kernels::nrm2(work.data(), work.size());
            if (residual <= opt.tol_residual) return StepAction::Stop;
        }
        return StepAction::ContinueModified;
    };

    OdeStatus st = rk.integrate(rhs, y, 0.0, opt.max_time, oopt, &obs);
    if (residual > opt.tol_residual)
        throw Error("no-convergence", "time integration hit the horizon at residual " +
                                          std::to_string(residual));
    SolveOut out;
    std::copy(y.begin(), y.end(), reinterpret_cast<double*>(v.data()));
    out.rho = vec_to_rho(v, d);
    hermitize_and_normalize(out.rho);
    out.residual = residual_of(lv_full, out.rho, work);
    out.n_rhs = st.n_rhs;
    out.solver = "integrate";
    return out;
}

} // namespace

double DensityMatrix::trace_error() const { return std::abs(rho.trace() - cdouble(1.0, 0.0)); }

double DensityMatrix::hermiticity_error() const {
    return (rho - rho.adjoint()).norm();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

int fock_cutoff_estimate(const ModelParams& p, const SpinSubspace& sub) {
    double st = sub.s_tilde();
    double n_lobe = p.g * p.g * p.n_atoms * st * st /
                    (p.omega_c * p.omega_c + 0.25 * p.kappa * p.kappa);
    return std::max(8, static_cast<int>(std::ceil(1.4 * n_lobe + 5.0 * std::sqrt(n_lobe + 1.0) + 3.0)));
}

std::vector<double> fock_populations(const DensityMatrix& dm) {
    const int nf = dm.n_max + 1;
    const int spin_dim = dm.sub.dimension();
    std::vector<double> p(nf, 0.0);
    for (int m = 0; m < spin_dim; ++m)
        for (int n = 0; n < nf; ++n) p[n] += dm.rho(m * nf + n, m * nf + n).real();
    return p;
}

SubspaceMoments moments_of(const DensityMatrix& dm) {
    SubspaceMoments mom;
    mom.two_s = dm.sub.two_s;
    mom.n_atoms = dm.sub.n_atoms;
    mom.method = "dm";
    mom.fock_cutoff_used = dm.n_max;
    const int nf = dm.n_max + 1;
    const double s = dm.sub.spin();
    for (int m = 0; m < dm.sub.dimension(); ++m) {
        double mval = -s + m;
        for (int n = 0; n < nf; ++n) {
            double pop = dm.rho(m * nf + n, m * nf + n).real();
            mom.sz_mean += mval * pop;
            mom.sz2_mean += mval * mval * pop;
            mom.photon_mean += n * pop;
        }
    }
    return mom;
}

SteadyStateResult steady_state(const ModelParams& p, const SpinSubspace& sub,
                               const SteadyStateOptions& opt) {
    p.validate();
    if (p.g == 0.0 && sub.two_s > 0)
        throw Error("degenerate-steady-state",
                    "g = 0 freezes the spin sector; the fixed-S steady state is not unique");

    int n_max = opt.n_max > 0 ? opt.n_max : fock_cutoff_estimate(p, sub);
    for (;;) {
        OperatorSet ops = build_operators(sub, n_max, opt.dim_cap);
        CsrMatrix h = build_hamiltonian(p, ops);
        std::vector<JumpOperator> jumps;
        jumps.push_back({p.kappa, ops.a});
        CsrMatrix lv = lindblad_superop(h, jumps);
        SectorMap sm = even_sector(sub.dimension(), n_max + 1);

        SolveOut so;
        SteadyStateOptions::Method method = opt.method;
        if (method == SteadyStateOptions::Method::Auto)
            method = (static_cast<long>(sm.to_full.size()) <= opt.dense_cap)
                         ? SteadyStateOptions::Method::DenseNull
                         : SteadyStateOptions::Method::Arnoldi;
        switch (method) {
            case SteadyStateOptions::Method::DenseNull:
                so = solve_dense_null(lv, sm, ops.dim);
                break;
            case SteadyStateOptions::Method::Arnoldi:
                so = solve_arnoldi(lv, h, jumps, ops.dim, opt);
                break;
            default:
                so = solve_integrate(lv, sub, n_max + 1, ops.dim, opt);
                break;
        }

        SteadyStateResult result;
        result.rho.sub = sub;
        result.rho.n_max = n_max;
        result.rho.rho = std::move(so.rho);
        result.solver = so.solver;
        result.n_rhs = so.n_rhs;

        std::vector<double> pops = fock_populations(result.rho);
        double tail = pops[n_max] + pops[n_max - 1];
        if (opt.adapt_cutoff && tail > opt.tail_tol) {
            long next = 2L * n_max;
            if (static_cast<long>(sub.dimension()) * (next + 1) > opt.dim_cap)
                throw Error("cutoff-exceeded",
                            "Fock ladder would exceed the dimension cap at n_max = " +
                                std::to_string(next));
            n_max = static_cast<int>(next);
            continue;
        }

        result.moments = moments_of(result.rho);
        result.moments.fock_cutoff_used = n_max;
        result.moments.residual = so.residual;
        result.moments.converged = so.residual <= opt.tol_residual;
        result.moments.method = "dm";
        return result;
    }
}

} // namespace dicke
