#pragma once

#include <Eigen/Dense>

#include "dicke/moments.hpp"
#include "dicke/operators.hpp"

namespace dicke {

// Dense steady-state density matrix on the |S,M> (x) |n> product basis.
struct DensityMatrix {
    SpinSubspace sub;
    int n_max = 0;
    Eigen::MatrixXcd rho;

    int dim() const { return static_cast<int>(rho.rows()); }
    double trace_error() const;        // |tr(rho) - 1|
    double hermiticity_error() const;  // ||rho - rho^dag||_F
    double min_eigenvalue() const;
};

struct SteadyStateOptions {
    enum class Method { Auto, DenseNull, Arnoldi, Integrate };
    Method method = Method::Auto;
    double tol_residual = 1e-9;  // ||d rho/dt||_F at unit trace
    int n_max = 0;               // 0 -> adaptive start estimate
    bool adapt_cutoff = true;    // double n_max while the Fock tail is occupied
    double tail_tol = 1e-8;      // population allowed in the top two Fock levels
    int dim_cap = DEFAULT_DIM_CAP;
    int dense_cap = 4096;     // vectorized (sector) dimension for the direct solve
    double max_time = 5e4;    // horizon cap for the Integrate method
    std::uint64_t seed = 0x0d1cce5eedULL;
};

struct SteadyStateResult {
    DensityMatrix rho;
    SubspaceMoments moments;
    std::string solver;  // "dense-null" | "arnoldi" | "integrate"
    long n_rhs = 0;
};

// Steady state of the unperturbed master equation restricted to one
// S-subspace. Rejects parameter sets whose spin sector has no dynamics
// (g = 0 with S > 0) as "degenerate-steady-state".
SteadyStateResult steady_state(const ModelParams& p, const SpinSubspace& sub,
                               const SteadyStateOptions& opt = {});

// Moments of a given density matrix (diagnostics for tests).
SubspaceMoments moments_of(const DensityMatrix& dm);

// Fock-level populations p_n = sum_M rho[(M,n),(M,n)].
std::vector<double> fock_populations(const DensityMatrix& dm);

// Start estimate for the adaptive Fock ladder: displaced-lobe photon number
// g^2 N s~^2 / (omega_c^2 + kappa^2/4), padded for the quantum spread.
int fock_cutoff_estimate(const ModelParams& p, const SpinSubspace& sub);

} // namespace dicke
