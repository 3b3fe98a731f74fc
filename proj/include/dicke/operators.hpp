#pragma once

#include "dicke/csr.hpp"
#include "dicke/model.hpp"

namespace dicke {

// Collective spin and photon operators on the product basis |S,M> (x) |n>,
// M-major: index = (M + S)*(n_max+1) + n, with M = -S..S and n = 0..n_max.
struct OperatorSet {
    SpinSubspace sub;
    int n_max = 0;
    int dim = 0;  // (2S+1)(n_max+1)
    CsrMatrix a, adag, n_photon;
    CsrMatrix sx, sy, sz, sp, sm, s2;
};

// Hard guard against runaway product dimensions (tunable by callers that
// know what they are doing).
inline constexpr int DEFAULT_DIM_CAP = 20000;

OperatorSet build_operators(const SpinSubspace& sub, int n_max, int dim_cap = DEFAULT_DIM_CAP);

// H = omega_c a^dag a + 2 omega_0 Sz + g/sqrt(N) (S+ + S-)(a + a^dag)
CsrMatrix build_hamiltonian(const ModelParams& p, const OperatorSet& ops);

// Unperturbed master-equation generator on the subspace: -i[H,.] + kappa D[a].
CsrMatrix subspace_liouvillian(const ModelParams& p, const OperatorSet& ops);

// Per-atom operators on the 2^N (x) Fock product space (spin bits major,
// bit n set = atom n excited). Only used by the brute-force validator.
struct FullSpaceOperators {
    int n_atoms = 0;
    int n_max = 0;
    int dim_spin = 0;  // 2^N
    int dim = 0;       // 2^N (n_max+1)
    std::vector<CsrMatrix> sigma_z, sigma_p, sigma_m;  // with photon identity
    CsrMatrix a, adag, n_photon;
    CsrMatrix sx, sy, sz, s2;
    CsrMatrix s2_spin_only;  // on the 2^N spin factor, for projector builds

    CsrMatrix permutation(int i, int j) const;
};

FullSpaceOperators build_full_space(int n_atoms, int n_max, int dim_cap = 2000);

CsrMatrix full_hamiltonian(const ModelParams& p, const FullSpaceOperators& ops);

} // namespace dicke
