#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke {

// Physical rates of one open Dicke model instance. All rates are expressed
// in units of the cavity decay rate; kappa stays a field so the formulas
// remain general.
struct ModelParams {
    double omega_c = 1.0;  // cavity frequency
    double omega_0 = 0.5;  // atomic transition frequency (enters as 2*omega_0*Sz)
    double g = 0.9;        // collective coupling, Hamiltonian carries g/sqrt(N)
    double kappa = 1.0;    // cavity decay rate
    int n_atoms = 1;

    void validate() const;
    double g_scaled() const;  // g / sqrt(N)
};

// Perturbation strength split between local dephasing and local decay:
// gamma_phi = f*gamma, gamma_down = (1-f)*gamma. The split is always derived,
// never stored.
struct PerturbationSpec {
    double gamma = 0.0;
    double f = 1.0;

    void validate() const;
    double gamma_phi() const { return f * gamma; }
    double gamma_down() const { return (1.0 - f) * gamma; }
    double gamma_tilde() const { return 0.5 * (gamma_phi() + gamma_down()); }
};

// One total-spin sector. 2S is stored as an integer so half-integer spins for
// odd N stay exact (float keys break map lookups).
struct SpinSubspace {
    int two_s = 0;
    int n_atoms = 1;

    SpinSubspace() = default;
    SpinSubspace(int two_s_, int n_atoms_);

    double spin() const { return 0.5 * two_s; }
    double s_tilde() const { return static_cast<double>(two_s) / n_atoms; }
    int dimension() const { return two_s + 1; }  // number of M levels
    double casimir() const { return spin() * (spin() + 1.0); }

    bool operator==(const SpinSubspace& o) const {
        return two_s == o.two_s && n_atoms == o.n_atoms;
    }
};

// S = S_min, S_min+1, ..., N/2 in increasing order; S_min = (N mod 2)/2.
// List length is floor(N/2)+1.
std::vector<SpinSubspace> enumerate_subspaces(int n_atoms);

// Number of distinct total spins for n_atoms.
inline int subspace_count(int n_atoms) { return n_atoms / 2 + 1; }

// Multiplicity of the S-sector in the N-spin Hilbert space,
//   D_S = (2S+1) N! / ((N/2+S+1)! (N/2-S)!),
// computed exactly (big-integer beyond 64 bits). `value` is the rounded
// double, `digits` the exact decimal string.
struct Degeneracy {
    double value = 0.0;
    std::string digits;
    bool exact_in_double = false;  // true when the integer fits 2^53
};

Degeneracy degeneracy(const SpinSubspace& sub);

// Critical normalized spin for a fixed coupling,
//   s_c = omega_0 (omega_c^2 + kappa^2/4) / (2 omega_c g^2),
// empty when s_c > 1 (no subspace is superradiant). g = 0 is rejected.
std::optional<double> critical_spin(const ModelParams& p);

// Critical coupling for a fixed normalized spin on the same curve,
//   g_c = sqrt(omega_0 (omega_c^2 + kappa^2/4) / (2 omega_c s_tilde)).
double critical_coupling(const ModelParams& p, double s_tilde);

} // namespace dicke
