#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "dicke/csr.hpp"

namespace dicke {

// Least-damped eigenpairs (largest real parts) of a sparse generator L.
// The Krylov basis can be expanded with different operators; eigenvalues and
// residuals always come from a Rayleigh-Ritz projection of L itself on the
// assembled basis, so an imperfect expansion operator only slows convergence
// and can never fake a converged pair.
struct SlowSpectrumOptions {
    int n_wanted = 4;
    int subspace_dim = 96;   // basis size per cycle
    int max_cycles = 8;
    double tol = 1e-9;       // absolute residual ||L x - lambda x||, unit x
    std::uint64_t seed = 0x5eed1234u;
};

struct RitzPair {
    cdouble lambda;
    std::vector<cdouble> vec;  // unit 2-norm
    double residual = 0.0;
    bool converged = false;
};

struct SlowSpectrumResult {
    std::vector<RitzPair> pairs;  // sorted by descending Re(lambda)
    long n_matvec = 0;            // expansion-operator applications
    long n_rhs = 0;               // sparse matvecs consumed in total
};

using LinearOp = std::function<void(const cdouble* in, cdouble* out)>;
// shifted solve hook used to precondition restart directions
using ShiftedSolveOp = std::function<void(const cdouble* in, cdouble* out, cdouble shift)>;

// Generic engine: expand with `expander`, project L.
SlowSpectrumResult slow_spectrum_subspace(const CsrMatrix& lv, const LinearOp& expander,
                                          const SlowSpectrumOptions& opt,
                                          const std::vector<cdouble>* start = nullptr,
                                          const ShiftedSolveOp* jd_restart = nullptr);

// Expansion with L directly (adequate for mildly non-normal operators).
SlowSpectrumResult slow_spectrum_arnoldi(const CsrMatrix& lv, const SlowSpectrumOptions& opt,
                                         const std::vector<cdouble>* start = nullptr);

// Expansion with a low-accuracy exp(L tau) filter (slow but assumption-free;
// tau <= 0 picks ~40/||L||_inf).
SlowSpectrumResult slow_spectrum_filtered(const CsrMatrix& lv, double tau,
                                          const SlowSpectrumOptions& opt,
                                          const std::vector<cdouble>* start = nullptr);

// Shift-invert-style expansion for Lindblad generators split as
//   L = L0 + K,  L0(rho) = -i(H_eff rho - rho H_eff^dag),  K = recycling,
// with H_eff dense-diagonalized once; (L0 - sigma)^-1 K is applied through
// exact Sylvester solves in the H_eff eigenbasis. This collapses the slow
// cluster of L onto the dominant cluster of the expansion operator and makes
// the Krylov iteration independent of the fast Hamiltonian scales.
class JumpFilteredExpander {
public:
    JumpFilteredExpander(const Eigen::MatrixXcd& h_eff, CsrMatrix k_superop, double sigma);

    void operator()(const cdouble* in, cdouble* out) const;
    // (L0 - sigma - shift)^-1 applied to `in` (no K factor)
    void solve_shifted(const cdouble* in, cdouble* out, cdouble shift) const;
    int dim() const { return d_; }
    double eigvec_condition() const { return cond_; }

private:
    int d_;
    double sigma_;
    double cond_;
    Eigen::MatrixXcd v_, vinv_;
    Eigen::VectorXcd e_;
    CsrMatrix k_;
};

// Split a Lindblad generator into the effective-Hamiltonian drift and the
// recycling superoperator: H_eff = H - i/2 sum rate L^dag L (dense),
// K = sum rate (L . L^dag) (sparse).
std::pair<Eigen::MatrixXcd, CsrMatrix> split_lindblad(const CsrMatrix& h,
                                                      const std::vector<JumpOperator>& jumps);

// y(t0+T) for dy/dt = L y, adaptive; y is modified in place.
void propagate(const CsrMatrix& lv, std::vector<cdouble>& y, double T, double rtol = 1e-12,
               double atol = 1e-14);

} // namespace dicke
