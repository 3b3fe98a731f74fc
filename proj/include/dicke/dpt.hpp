#pragma once

#include <complex>
#include <string>
#include <vector>

#include "dicke/moments.hpp"
#include "dicke/wigner.hpp"

namespace dicke {

// Tridiagonal generator acting on the spin-sector probabilities, stored by
// bands. Row/column index follows enumerate_subspaces order; entry (r,c) is
// the rate into sector r from sector c, columns sum to zero.
struct CouplingMatrix {
    int n_atoms = 0;
    std::vector<SpinSubspace> subspaces;
    std::vector<double> diag;   // C[i][i]
    std::vector<double> upper;  // C[i][i+1], flow downward from i+1 to i
    std::vector<double> lower;  // C[i+1][i], flow upward from i to i+1
    double gamma = 1.0;
    double f = 1.0;

    int size() const { return static_cast<int>(diag.size()); }
    double entry(int r, int c) const;
    double max_abs() const;
    // column sums (analytically zero; exposed so tests can measure roundoff)
    std::vector<double> column_sums() const;
    // optional exact-conservation repair: diagonals recomputed as negative
    // off-diagonal column sums (off by default; the formulas come first)
    void enforce_conservation();
};

struct SpinDistribution {
    int n_atoms = 0;
    std::vector<SpinSubspace> subspaces;
    std::vector<double> p;
    double max_clamp = 0.0;  // largest negativity removed by the clamp

    int size() const { return static_cast<int>(p.size()); }
};

struct LiouvillianSpectrum {
    std::vector<cdouble> lambda;                 // descending real part
    std::vector<std::vector<double>> right_vec;  // unit 2-norm, dpt source only
    std::vector<std::vector<double>> left_vec;
    std::string source;  // "dpt" | "oracle"
};

// Appendix-style moment-form couplings; both require moments for every
// subspace of enumerate_subspaces(n_atoms) and cone-respecting inputs.
CouplingMatrix coupling_dephasing(const MomentTable& moments, int n_atoms);
CouplingMatrix coupling_decay(const MomentTable& moments, int n_atoms);

// C = gamma (f O_phi + (1-f) O_down)
CouplingMatrix mix(const CouplingMatrix& o_phi, const CouplingMatrix& o_down,
                   const PerturbationSpec& pert);

// Right null vector of C, normalized to sum 1, solved directly on the
// tridiagonal system with one row replaced by the normalization constraint.
SpinDistribution null_distribution(const CouplingMatrix& c);

// k least-damped eigenpairs. Physical rate matrices are similar to a real
// symmetric tridiagonal matrix, so the spectrum is real and computed by
// Sturm bisection + tridiagonal inverse iteration; a dense solver covers
// non-symmetrizable inputs up to 4000 sectors.
LiouvillianSpectrum slow_spectrum(const CouplingMatrix& c, int k);

double mean_normalized_spin(const SpinDistribution& p);

// sum_S p(S) W_S over per-sector Wigner grids sharing axes.
WignerGrid mixture_wigner(const SpinDistribution& p, const std::vector<WignerGrid>& per_s);

// Count of strict sign changes along a vector, ignoring entries below
// `floor` times the max magnitude (node counter for eigenvectors).
int sign_changes(const std::vector<double>& v, double floor = 1e-9);

} // namespace dicke
