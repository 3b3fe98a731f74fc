#pragma once

#include <Eigen/Dense>

#include "dicke/arnoldi.hpp"
#include "dicke/dpt.hpp"
#include "dicke/operators.hpp"

namespace dicke {

// Vectorized Lindblad generator on the full 2^N (x) Fock space, including
// the cavity loss and the per-atom dephasing/decay channels. Column-stacked
// convention vec(rho)[i + d*j] = rho(i,j), as everywhere in this codebase.
struct OracleLiouvillian {
    ModelParams params;
    PerturbationSpec pert;
    FullSpaceOperators ops;
    CsrMatrix lv;  // dimension d^2, d = 2^N (n_max+1)

    int dim() const { return ops.dim; }
    long vec_dim() const { return static_cast<long>(ops.dim) * ops.dim; }
};

// n_max = 0 picks the adaptive estimate of the fixed-S solver evaluated at
// S = N/2 (the widest ladder in the full space).
OracleLiouvillian build_liouvillian(const ModelParams& p, const PerturbationSpec& pert,
                                    int n_max = 0, int dim_cap = 2000);

// k eigenvalues with the largest real parts. Dense diagonalization when the
// vectorized dimension is small enough, otherwise the matrix-free Arnoldi.
LiouvillianSpectrum slow_cluster(const OracleLiouvillian& ol, int k,
                                 const SlowSpectrumOptions* arnoldi_opt = nullptr);

// Unique steady state for gamma > 0: null right-eigenvector, unit trace,
// hermitized. `residual_out` (optional) receives ||L rho||_F.
Eigen::MatrixXcd oracle_steady_state(const OracleLiouvillian& ol, double tol = 1e-9,
                                     double* residual_out = nullptr);

// p(S) = tr(P_S rho) with P_S the total-spin projector built from the
// eigendecomposition of S^2 (photon sector traced out first).
SpinDistribution spin_resolved_population(const Eigen::MatrixXcd& rho,
                                          const FullSpaceOperators& ops);

// max over atom pairs of ||P_ij rho P_ij^dag - rho||_F.
double permutation_defect(const Eigen::MatrixXcd& rho, const FullSpaceOperators& ops);

// ||vec(I)^dag L||_2: trace preservation of the generator.
double trace_preservation_defect(const OracleLiouvillian& ol);

} // namespace dicke
