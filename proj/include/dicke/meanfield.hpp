#pragma once

#include "dicke/kernels.hpp"
#include "dicke/moments.hpp"

namespace dicke {

// First-order (factorized) mean-field state: <a>, <Sx>, <Sy>, <Sz>.
struct MF1State {
    cdouble a{0.0, 0.0};
    double sx = 0.0, sy = 0.0, sz = 0.0;

    double spin_norm() const;  // |(sx,sy,sz)|
};

// Second-order cumulant state. First-moment block plus photon and spin
// second moments; <a Sz> is not tracked and factorizes as <a><Sz>.
struct MF2State {
    cdouble a{0.0, 0.0};
    double sx = 0.0, sy = 0.0, sz = 0.0;
    double ada = 0.0;            // <a^dag a>
    cdouble aa{0.0, 0.0};        // <a a>
    cdouble a_sx{0.0, 0.0};      // <a Sx>
    cdouble a_sy{0.0, 0.0};      // <a Sy>
    double sx2 = 0.0, sy2 = 0.0, sz2 = 0.0;
    cdouble sxsy{0.0, 0.0};      // <Sx Sy>
};

MF1State mf1_rhs(const MF1State& s, const ModelParams& p, const PerturbationSpec& pert);
MF2State mf2_rhs(const MF2State& s, const ModelParams& p, const PerturbationSpec& pert);

// Dicke-state expectation values of |S, M=-S> (x) |0>.
MF2State init_dicke_state(const SpinSubspace& sub);
// MF1 start: same spin sector plus the symmetry-breaking seed
// <Sx> = 1e-3 S and the adiabatic coherent amplitude that goes with it.
MF1State init_mf1_state(const SpinSubspace& sub, const ModelParams& p);

enum class MfOrder { MF1, MF2 };

struct MfSteadyOptions {
    double tol_ss = 1e-8;     // max relative moment change over the window
    double window = 50.0;     // trailing window, units of 1/kappa
    double rtol = 1e-10;      // integrator tolerance per step
    double atol = 1e-12;
    double max_time = 5e4;
    double sample_dt = 1.0;
};

struct MfSteadyResult {
    MF2State state;           // MF1 runs fill the first-moment block only
    double elapsed = 0.0;
    bool converged = false;
    bool limit_cycle = false;
    double window_delta = 0.0;  // last observed window change
};

// Integrates either closure to its steady state. Throws "diverged" on
// blow-up; persistent bounded oscillation is reported via limit_cycle.
MfSteadyResult integrate_to_steady(MfOrder order, const MF2State& init, const ModelParams& p,
                                   const PerturbationSpec& pert,
                                   const MfSteadyOptions& opt = {});

// Casimir inversion: <S^2> -> S_est = (-1+sqrt(1+4<S^2>))/2, normalized.
double total_spin_from_moments_mf2(const MF2State& s, int n_atoms);
double total_spin_from_moments_mf1(const MF1State& s, int n_atoms);

// Unperturbed MF2 steady state of one subspace, packaged for the
// perturbation engine (same schema as the density-matrix solver).
SubspaceMoments mf2_subspace_moments(const ModelParams& p, const SpinSubspace& sub,
                                     const MfSteadyOptions& opt = {});

} // namespace dicke
