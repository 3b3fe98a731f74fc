#include "dicke/operators.hpp"

#include <cmath>

namespace dicke {

namespace {

CsrMatrix photon_annihilator(int n_max) {
    Triplets t(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) t.add(n - 1, n, std::sqrt(static_cast<double>(n)));
    return t.build();
}

CsrMatrix spin_lowering(double s) {
    const int dim = static_cast<int>(std::lround(2 * s)) + 1;
    Triplets t(dim, dim);
    for (int i = 1; i < dim; ++i) {
        double m = -s + i;
        t.add(i - 1, i, std::sqrt(s * (s + 1.0) - m * (m - 1.0)));
    }
    return t.build();
}

CsrMatrix spin_z(double s) {
    const int dim = static_cast<int>(std::lround(2 * s)) + 1;
    Triplets t(dim, dim);
    for (int i = 0; i < dim; ++i) t.add(i, i, -s + i);
    return t.build();
}

} // namespace

OperatorSet build_operators(const SpinSubspace& sub, int n_max, int dim_cap) {
    if (n_max < 1) throw Error("bad-params", "n_max must be >= 1");
    const long dim = static_cast<long>(sub.dimension()) * (n_max + 1);
    if (dim > dim_cap)
        throw Error("dimension-cap",
                    "product dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(dim_cap));

    OperatorSet ops;
    ops.sub = sub;
    ops.n_max = n_max;
    ops.dim = static_cast<int>(dim);

    const double s = sub.spin();
    CsrMatrix i_ph = CsrMatrix::identity(n_max + 1);
    CsrMatrix i_sp = CsrMatrix::identity(sub.dimension());

    CsrMatrix a_ph = photon_annihilator(n_max);
    ops.a = kron(i_sp, a_ph);
    ops.adag = dagger(ops.a);
    ops.n_photon = multiply(ops.adag, ops.a);

    CsrMatrix sm_sp = spin_lowering(s);
    CsrMatrix sp_sp = dagger(sm_sp);
    ops.sm = kron(sm_sp, i_ph);
    ops.sp = kron(sp_sp, i_ph);
    ops.sz = kron(spin_z(s), i_ph);
    ops.sx = scale(0.5, add(ops.sp, ops.sm));
    ops.sy = scale(cdouble(0.0, -0.5), add(ops.sp, scale(-1.0, ops.sm)));
    ops.s2 = add(multiply(ops.sx, ops.sx),
                 add(multiply(ops.sy, ops.sy), multiply(ops.sz, ops.sz)));
    return ops;
}

CsrMatrix build_hamiltonian(const ModelParams& p, const OperatorSet& ops) {
    p.validate();
    CsrMatrix h = scale(p.omega_c, ops.n_photon);
    h = add(h, scale(2.0 * p.omega_0, ops.sz));
    CsrMatrix x = add(ops.sp, ops.sm);
    CsrMatrix q = add(ops.a, ops.adag);
    h = add(h, scale(p.g_scaled(), multiply(x, q)));
    return h;
}

CsrMatrix subspace_liouvillian(const ModelParams& p, const OperatorSet& ops) {
    CsrMatrix h = build_hamiltonian(p, ops);
    std::vector<JumpOperator> jumps;
    jumps.push_back({p.kappa, ops.a});
    return lindblad_superop(h, jumps);
}

CsrMatrix FullSpaceOperators::permutation(int i, int j) const {
    Triplets t(dim, dim);
    const int nf = n_max + 1;
    for (int b = 0; b < dim_spin; ++b) {
        int bi = (b >> i) & 1, bj = (b >> j) & 1;
        int bp = b;
        if (bi != bj) bp = b ^ ((1 << i) | (1 << j));
        for (int n = 0; n < nf; ++n) t.add(bp * nf + n, b * nf + n, 1.0);
    }
    return t.build();
}

FullSpaceOperators build_full_space(int n_atoms, int n_max, int dim_cap) {
    if (n_atoms < 1 || n_atoms > 4)
        throw Error("dimension-cap", "full-space validator is capped at 4 atoms");
    if (n_max < 1) throw Error("bad-params", "n_max must be >= 1");
    FullSpaceOperators ops;
    ops.n_atoms = n_atoms;
    ops.n_max = n_max;
    ops.dim_spin = 1 << n_atoms;
    const long dim = static_cast<long>(ops.dim_spin) * (n_max + 1);
    if (dim > dim_cap)
        throw Error("dimension-cap",
                    "full-space dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(dim_cap));
    ops.dim = static_cast<int>(dim);

    CsrMatrix i_ph = CsrMatrix::identity(n_max + 1);
    CsrMatrix i_sp = CsrMatrix::identity(ops.dim_spin);

    ops.a = kron(i_sp, photon_annihilator(n_max));
    ops.adag = dagger(ops.a);
    ops.n_photon = multiply(ops.adag, ops.a);

    for (int at = 0; at < n_atoms; ++at) {
        Triplets tz(ops.dim_spin, ops.dim_spin), tm(ops.dim_spin, ops.dim_spin);
        for (int b = 0; b < ops.dim_spin; ++b) {
            bool exc = (b >> at) & 1;
            tz.add(b, b, exc ? 1.0 : -1.0);
            if (exc) tm.add(b ^ (1 << at), b, 1.0);
        }
        ops.sigma_z.push_back(kron(tz.build(), i_ph));
        CsrMatrix sm = kron(tm.build(), i_ph);
        ops.sigma_p.push_back(dagger(sm));
        ops.sigma_m.push_back(std::move(sm));
    }

    auto half_sum = [&](const std::vector<CsrMatrix>& v) {
        CsrMatrix acc = v[0];
        for (std::size_t i = 1; i < v.size(); ++i) acc = add(acc, v[i]);
        return scale(0.5, acc);
    };
    ops.sz = half_sum(ops.sigma_z);
    std::vector<CsrMatrix> sig_x, sig_y;
    for (int at = 0; at < n_atoms; ++at) {
        sig_x.push_back(add(ops.sigma_p[at], ops.sigma_m[at]));
        sig_y.push_back(scale(cdouble(0.0, -1.0),
                              add(ops.sigma_p[at], scale(-1.0, ops.sigma_m[at]))));
    }
    ops.sx = half_sum(sig_x);
    ops.sy = half_sum(sig_y);
    ops.s2 = add(multiply(ops.sx, ops.sx),
                 add(multiply(ops.sy, ops.sy), multiply(ops.sz, ops.sz)));

    // spin-only S^2 = S-S+ + Sz(Sz+1) on the 2^N factor, for sector projectors
    {
        Triplets tz(ops.dim_spin, ops.dim_spin), tsp(ops.dim_spin, ops.dim_spin);
        for (int at = 0; at < n_atoms; ++at)
            for (int b = 0; b < ops.dim_spin; ++b) {
                tz.add(b, b, ((b >> at) & 1) ? 0.5 : -0.5);
                if (!((b >> at) & 1)) tsp.add(b | (1 << at), b, 1.0);
            }
        CsrMatrix szs = tz.build();
        CsrMatrix spc = tsp.build();
        ops.s2_spin_only = add(multiply(dagger(spc), spc),
                               add(multiply(szs, szs), szs));
    }
    return ops;
}

CsrMatrix full_hamiltonian(const ModelParams& p, const FullSpaceOperators& ops) {
    p.validate();
    CsrMatrix h = scale(p.omega_c, ops.n_photon);
    h = add(h, scale(2.0 * p.omega_0, ops.sz));
    CsrMatrix x = scale(2.0, ops.sx);  // S+ + S-
    CsrMatrix q = add(ops.a, ops.adag);
    h = add(h, scale(p.g_scaled(), multiply(x, q)));
    return h;
}

} // namespace dicke
