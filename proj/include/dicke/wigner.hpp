#pragma once

#include <Eigen/Dense>

#include "dicke/kernels.hpp"
#include "dicke/subspace_dm.hpp"

namespace dicke {

// Phase-space grid with W normalized so that the integral over dx dp is 1
// (vacuum peaks at 1/pi).
struct WignerGrid {
    std::vector<double> x;  // nx values
    std::vector<double> p;  // np values
    std::vector<double> w;  // row-major [ix * np + ip]

    double value(int ix, int ip) const { return w[static_cast<std::size_t>(ix) * p.size() + ip]; }
    double integral() const;  // trapezoid-free Riemann sum, uniform grid
    int local_maxima(double floor_frac = 0.05) const;
};

struct WignerGridSpec {
    int nx = 161;
    int np = 161;
    double extent = 0.0;  // half-width; 0 -> from the Fock cutoff
};

// Photon-sector reduction tr_spin(rho).
Eigen::MatrixXcd reduce_photon(const DensityMatrix& dm);

// Fock-basis Wigner transform of a photon density matrix. Throws
// "grid-truncation" when the grid misses more than 1% of the norm.
WignerGrid wigner_photon(const Eigen::MatrixXcd& rho_ph, const WignerGridSpec& spec = {},
                         Exec e = Exec::Auto);

WignerGrid wigner_photon(const DensityMatrix& dm, const WignerGridSpec& spec = {},
                         Exec e = Exec::Auto);

// Pointwise convex mixture sum_S p(S) W_S ; grids must share axes.
WignerGrid mixture_wigner(const std::vector<double>& weights,
                          const std::vector<WignerGrid>& grids);

} // namespace dicke
