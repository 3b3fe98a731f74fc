#include "dicke/arnoldi.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dicke/errors.hpp"
#include <cstdio>
#include <cstdlib>
#include <memory>

#include "dicke/ode.hpp"

namespace dicke {

namespace {

OdeRhs make_rhs(const CsrMatrix& lv) {
    return [&lv](double, const double* y, double* dydt) {
        lv.apply(reinterpret_cast<const cdouble*>(y), reinterpret_cast<cdouble*>(dydt));
    };
}

} // namespace

void propagate(const CsrMatrix& lv, std::vector<cdouble>& y, double T, double rtol,
               double atol) {
    DormandPrince rk(2 * y.size());
    OdeOptions opt;
    opt.rtol = rtol;
    opt.atol = atol;
    std::vector<double> yd(reinterpret_cast<double*>(y.data()),
                           reinterpret_cast<double*>(y.data()) + 2 * y.size());
    rk.integrate(make_rhs(lv), yd, 0.0, T, opt);
    std::copy(yd.begin(), yd.end(), reinterpret_cast<double*>(y.data()));
}

SlowSpectrumResult slow_spectrum_subspace(const CsrMatrix& lv, const LinearOp& expander,
                                          const SlowSpectrumOptions& opt,
                                          const std::vector<cdouble>* start,
                                          const ShiftedSolveOp* jd_restart) {
    const int n = lv.rows;
    if (lv.cols != n) throw Error("internal", "slow spectrum needs a square operator");
    const int k = std::min(opt.n_wanted, n);
    const int m = std::min(std::max(opt.subspace_dim, 2 * k + 6), n);

    SlowSpectrumResult out;

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_vec = [&]() {
        Eigen::VectorXcd v(n);
        for (int i = 0; i < n; ++i) v(i) = cdouble(gauss(rng), gauss(rng));
        return v;
    };

    Eigen::MatrixXcd basis(n, m);
    Eigen::MatrixXcd lbasis(n, m);
    Eigen::VectorXcd work(n);

    // classical Gram-Schmidt, two passes
    auto orthogonalize = [&](Eigen::VectorXcd& w, int cols) {
        for (int pass = 0; pass < 2; ++pass)
            if (cols > 0) {
                Eigen::VectorXcd coef = basis.leftCols(cols).adjoint() * w;
                w.noalias() -= basis.leftCols(cols) * coef;
            }
        return w.norm();
    };

    Eigen::VectorXcd v0 =
        start ? Eigen::Map<const Eigen::VectorXcd>(start->data(), n).eval() : random_vec();
    if (v0.norm() < 1e-300) v0 = random_vec();
    v0.normalize();

    Eigen::MatrixXcd kept, kept_l;  // Ritz vectors and their L-images
    std::vector<RitzPair> pairs;

    for (int cycle = 0; cycle < opt.max_cycles; ++cycle) {
        int filled = 0;
        for (int j = 0; j < kept.cols() && filled < m - 4; ++j) {
            Eigen::VectorXcd w = kept.col(j);
            Eigen::VectorXcd lw = kept_l.col(j);
            for (int pass = 0; pass < 2; ++pass)
                if (filled > 0) {
                    Eigen::VectorXcd coef = basis.leftCols(filled).adjoint() * w;
                    w.noalias() -= basis.leftCols(filled) * coef;
                    lw.noalias() -= lbasis.leftCols(filled) * coef;
                }
            double nr = w.norm();
            if (nr > 1e-8) {
                basis.col(filled) = w / nr;
                lbasis.col(filled) = lw / nr;
                ++filled;
            }
        }
        {
            Eigen::VectorXcd w = v0;
            double nr = orthogonalize(w, filled);
            if (nr < 1e-10) {
                w = random_vec();
                nr = orthogonalize(w, filled);
            }
            basis.col(filled) = w / nr;
            lv.apply(basis.col(filled).data(), lbasis.col(filled).data());
            out.n_rhs++;
            ++filled;
        }
        while (filled < m) {
            expander(basis.col(filled - 1).data(), work.data());
            out.n_matvec++;
            Eigen::VectorXcd w = work;
            double nr = orthogonalize(w, filled);
            if (nr < 1e-10 * std::max(1.0, work.norm())) {
                w = random_vec();
                nr = orthogonalize(w, filled);
            }
            basis.col(filled) = w / nr;
            lv.apply(basis.col(filled).data(), lbasis.col(filled).data());
            out.n_rhs++;
            ++filled;
        }

        Eigen::MatrixXcd a_small = basis.adjoint() * lbasis;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a_small);
        if (es.info() != Eigen::Success)
            throw Error("spectrum-failure", "projected eigenproblem did not converge");

        std::vector<int> order(m);
        for (int i = 0; i < m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return es.eigenvalues()(a).real() > es.eigenvalues()(b).real();
        });

        pairs.clear();
        const int n_keep = std::min(m, std::max(2 * k + 6, k + 10));
        Eigen::MatrixXcd new_kept(n, n_keep), new_kept_l(n, n_keep);
        for (int i = 0; i < n_keep; ++i) {
            const Eigen::VectorXcd y = es.eigenvectors().col(order[i]);
            Eigen::VectorXcd x = basis * y;
            Eigen::VectorXcd lx = lbasis * y;
            double nrm = x.norm();
            x /= nrm;
            lx /= nrm;
            new_kept.col(i) = x;
            new_kept_l.col(i) = lx;
            if (i < k) {
                cdouble lam = es.eigenvalues()(order[i]);
                double res = (lx - lam * x).norm();
                RitzPair p;
                p.lambda = lam;
                p.vec.assign(x.data(), x.data() + n);
                p.residual = res;
                p.converged = res <= opt.tol;
                pairs.push_back(std::move(p));
            }
        }
        kept = std::move(new_kept);
        kept_l = std::move(new_kept_l);

        bool all_ok = true;
        for (const auto& p : pairs) all_ok = all_ok && p.converged;
        if (all_ok) break;

        if (std::getenv("DICKE_TRACE_ARNOLDI")) {
            std::fprintf(stderr, "[arnoldi] cycle %d:", cycle);
            for (const auto& p : pairs)
                std::fprintf(stderr, " (%.3e,%.3e|r=%.1e)", p.lambda.real(), p.lambda.imag(),
                             p.residual);
            std::fprintf(stderr, "\n");
        }
        int worst = 0;
        for (int i = 1; i < k; ++i)
            if (pairs[i].residual > pairs[worst].residual) worst = i;
        if (jd_restart) {
            // one step of preconditioned inverse iteration toward the worst
            // Ritz value: v0 = (L0 - lambda)^-1 (L x - lambda x)
            Eigen::Map<const Eigen::VectorXcd> xw(pairs[worst].vec.data(), n);
            Eigen::VectorXcd lxw(n), rw(n);
            lv.apply(xw.data(), lxw.data());
            out.n_rhs++;
            rw = lxw - pairs[worst].lambda * xw;
            v0.resize(n);
            (*jd_restart)(rw.data(), v0.data(), pairs[worst].lambda);
            if (v0.norm() < 1e-300) v0 = random_vec();
        } else {
            v0 = Eigen::Map<const Eigen::VectorXcd>(pairs[worst].vec.data(), n);
            v0 += 1e-8 * random_vec();
        }
    }

    out.pairs = std::move(pairs);
    return out;
}

SlowSpectrumResult slow_spectrum_arnoldi(const CsrMatrix& lv, const SlowSpectrumOptions& opt,
                                         const std::vector<cdouble>* start) {
    LinearOp op = [&lv](const cdouble* in, cdouble* out) { lv.apply(in, out); };
    return slow_spectrum_subspace(lv, op, opt, start);
}

SlowSpectrumResult slow_spectrum_filtered(const CsrMatrix& lv, double tau,
                                          const SlowSpectrumOptions& opt,
                                          const std::vector<cdouble>* start) {
    if (tau <= 0.0) tau = 40.0 / std::max(lv.norm_inf(), 1e-12);
    const int n = lv.rows;
    auto rk = std::make_shared<DormandPrince>(static_cast<std::size_t>(2) * n);
    auto rhs = std::make_shared<OdeRhs>(make_rhs(lv));
    LinearOp op = [&lv, rk, rhs, tau, n](const cdouble* in, cdouble* out) {
        std::vector<double> yd(reinterpret_cast<const double*>(in),
                               reinterpret_cast<const double*>(in) + 2 * n);
        OdeOptions oopt;
        oopt.rtol = 3e-3;  // a crude filter is still a polynomial in L
        oopt.atol = 1e-10;
        rk->integrate(*rhs, yd, 0.0, tau, oopt);
        std::copy(yd.begin(), yd.end(), reinterpret_cast<double*>(out));
    };
    return slow_spectrum_subspace(lv, op, opt, start);
}

std::pair<Eigen::MatrixXcd, CsrMatrix> split_lindblad(const CsrMatrix& h,
                                                      const std::vector<JumpOperator>& jumps) {
    const int d = h.rows;
    Eigen::MatrixXcd h_eff = Eigen::MatrixXcd::Zero(d, d);
    for (int r = 0; r < d; ++r)
        for (std::int64_t t = h.row_ptr[r]; t < h.row_ptr[r + 1]; ++t)
            h_eff(r, h.col[t]) += h.val[t];
    CsrMatrix k;
    bool first = true;
    for (const auto& j : jumps) {
        if (j.rate == 0.0) continue;
        CsrMatrix ldl = multiply(dagger(j.op), j.op);
        for (int r = 0; r < d; ++r)
            for (std::int64_t t = ldl.row_ptr[r]; t < ldl.row_ptr[r + 1]; ++t)
                h_eff(r, ldl.col[t]) += cdouble(0, -0.5) * j.rate * ldl.val[t];
        CsrMatrix sand = scale(cdouble(j.rate, 0.0), superop_sandwich(j.op));
        k = first ? std::move(sand) : add(k, sand);
        first = false;
    }
    if (first) k = scale(cdouble(0, 0), superop_left(CsrMatrix::identity(d)));
    return {std::move(h_eff), std::move(k)};
}

JumpFilteredExpander::JumpFilteredExpander(const Eigen::MatrixXcd& h_eff, CsrMatrix k_superop,
                                           double sigma)
    : d_(static_cast<int>(h_eff.rows())), sigma_(sigma), k_(std::move(k_superop)) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h_eff);
    if (es.info() != Eigen::Success)
        throw Error("spectrum-failure", "effective Hamiltonian diagonalization failed");
    v_ = es.eigenvectors();
    e_ = es.eigenvalues();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v_);
    vinv_ = lu.solve(Eigen::MatrixXcd::Identity(d_, d_));
    cond_ = v_.norm() * vinv_.norm() / d_;  // crude scale-free indicator
}

void JumpFilteredExpander::solve_shifted(const cdouble* in, cdouble* out, cdouble shift) const {
    const int d = d_;
    Eigen::Map<const Eigen::MatrixXcd> x(in, d, d);
    Eigen::Map<Eigen::MatrixXcd> y(out, d, d);
    Eigen::MatrixXcd s = vinv_ * x * vinv_.adjoint();
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            cdouble div = cdouble(0, -1) * (e_(i) - std::conj(e_(j))) - sigma_ - shift;
            double mag = std::abs(div);
            if (mag < 1e-14) div = 1e-14;
            s(i, j) /= div;
        }
    y = v_ * s * v_.adjoint();
}

void JumpFilteredExpander::operator()(const cdouble* in, cdouble* out) const {
    const int d = d_;
    Eigen::Map<const Eigen::MatrixXcd> x(in, d, d);
    Eigen::Map<Eigen::MatrixXcd> y(out, d, d);

    // K rho
    std::vector<cdouble> kx(static_cast<std::size_t>(d) * d);
    k_.apply(in, kx.data());
    Eigen::Map<Eigen::MatrixXcd> kxm(kx.data(), d, d);

    // solve (L0 - sigma) Y = K rho in the H_eff eigenbasis:
    // L0 rho = -i(H_eff rho - rho H_eff^dag) -> divisor -i(E_i - conj(E_j)) - sigma
    Eigen::MatrixXcd s = vinv_ * kxm * vinv_.adjoint();
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            cdouble div = cdouble(0, -1) * (e_(i) - std::conj(e_(j))) - sigma_;
            s(i, j) /= div;
        }
    y = v_ * s * v_.adjoint();
}

} // namespace dicke
