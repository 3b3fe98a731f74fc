#pragma once

#include <string>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/model.hpp"

namespace dicke {

// Steady-state first and second Sz moments of one S-subspace. This record is
// the only thing the perturbation-theory engine needs, so the fixed-S
// density-matrix solver and the cumulant integrator emit the same schema.
struct SubspaceMoments {
    int two_s = 0;
    int n_atoms = 0;
    double sz_mean = 0.0;
    double sz2_mean = 0.0;
    double photon_mean = 0.0;
    int fock_cutoff_used = 0;  // 0 for moment sources without a Fock ladder
    bool converged = false;
    double residual = 0.0;
    std::string method;  // "dm" | "mf2"

    double spin() const { return 0.5 * two_s; }
    double s_tilde() const { return static_cast<double>(two_s) / n_atoms; }

    // sz in [-S,S], sz^2 in [sz_mean^2, S^2] up to `tol` slack (absolute,
    // scaled by max(1, S^2)). Throws "moment-cone" beyond the slack.
    void check_cone(double tol = 1e-7) const;
    // Pulls marginal violations back onto the cone boundary; returns the
    // largest adjustment applied.
    double clamp_to_cone(double tol = 1e-7);
};

// Moments for every subspace of one model instance, ordered as
// enumerate_subspaces() orders them.
using MomentTable = std::vector<SubspaceMoments>;

// Verifies the table covers each S of enumerate_subspaces(n_atoms) exactly
// once and returns it sorted; throws "missing-subspace" otherwise.
MomentTable validate_table(MomentTable table, int n_atoms);

} // namespace dicke
