#include "dicke/wigner.hpp"

#include <cmath>

#include "dicke/errors.hpp"

namespace dicke {

double WignerGrid::integral() const {
    if (x.size() < 2 || p.size() < 2) return 0.0;
    double dx = x[1] - x[0], dp = p[1] - p[0];
    double s = 0.0;
    for (double v : w) s += v;
    return s * dx * dp;
}

int WignerGrid::local_maxima(double floor_frac) const {
    const int nx = static_cast<int>(x.size()), np = static_cast<int>(p.size());
    double peak = 0.0;
    for (double v : w) peak = std::max(peak, v);
    const double floor = floor_frac * peak;
    int count = 0;
    for (int i = 1; i + 1 < nx; ++i)
        for (int j = 1; j + 1 < np; ++j) {
            double v = value(i, j);
            if (v < floor) continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    if (value(i + di, j + dj) >= v) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) ++count;
        }
    return count;
}

Eigen::MatrixXcd reduce_photon(const DensityMatrix& dm) {
    const int nf = dm.n_max + 1;
    Eigen::MatrixXcd ph = Eigen::MatrixXcd::Zero(nf, nf);
    for (int m = 0; m < dm.sub.dimension(); ++m)
        ph += dm.rho.block(m * nf, m * nf, nf, nf);
    return ph;
}

namespace {

// W(x,p) at alpha=(x+ip)/sqrt(2) from the Fock matrix via the associated
// Laguerre series; u = 4|alpha|^2 stays below ~1300 for the default extents
// so the unscaled recurrence cannot overflow.
double wigner_point(const Eigen::MatrixXcd& rho, const std::vector<double>& cnk, double xx,
                    double pp) {
    const int nf = static_cast<int>(rho.rows());
    const cdouble alpha(xx / std::sqrt(2.0), pp / std::sqrt(2.0));
    const double u = 4.0 * std::norm(alpha);
    if (u > 1300.0) return 0.0;

    double total_re = 0.0;
    cdouble pow2a(1.0, 0.0);  // (2 alpha)^k
    for (int k = 0; k < nf; ++k) {
        // sum_n rho(n, n+k) (-1)^n c_{n,k} L_n^k(u)
        cdouble tk(0.0, 0.0);
        double lm1 = 0.0, l = 1.0;  // L_{-1} = 0, L_0 = 1
        for (int n = 0; n + k < nf; ++n) {
            double sign = (n & 1) ? -1.0 : 1.0;
            tk += rho(n, n + k) * (sign * cnk[static_cast<std::size_t>(k) * nf + n] * l);
            double lp = ((2.0 * n + 1.0 + k - u) * l - (n + k) * lm1) / (n + 1.0);
            lm1 = l;
            l = lp;
        }
        tk *= pow2a;
        total_re += (k == 0) ? tk.real() : 2.0 * tk.real();
        pow2a *= 2.0 * alpha;
    }
    return std::exp(-2.0 * std::norm(alpha)) * total_re / M_PI;
}

} // namespace

WignerGrid wigner_photon(const Eigen::MatrixXcd& rho_ph, const WignerGridSpec& spec, Exec e) {
    const int nf = static_cast<int>(rho_ph.rows());
    if (nf < 1 || rho_ph.cols() != nf) throw Error("bad-params", "square photon matrix required");

    WignerGrid g;
    double extent = spec.extent > 0.0 ? spec.extent : std::sqrt(2.0 * nf) + 3.0;
    g.x.resize(spec.nx);
    g.p.resize(spec.np);
    for (int i = 0; i < spec.nx; ++i)
        g.x[i] = -extent + 2.0 * extent * i / (spec.nx - 1);
    for (int j = 0; j < spec.np; ++j)
        g.p[j] = -extent + 2.0 * extent * j / (spec.np - 1);
    g.w.assign(static_cast<std::size_t>(spec.nx) * spec.np, 0.0);

    // c_{n,k} = sqrt(n!/(n+k)!)
    std::vector<double> cnk(static_cast<std::size_t>(nf) * nf, 0.0);
    for (int k = 0; k < nf; ++k) {
        double c = 1.0;
        for (int i = 1; i <= k; ++i) c /= std::sqrt(static_cast<double>(i));
        for (int n = 0; n + k < nf; ++n) {
            cnk[static_cast<std::size_t>(k) * nf + n] = c;
            c *= std::sqrt((n + 1.0) / (n + 1.0 + k));
        }
    }

    if (kernels::resolve(e) == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < spec.nx; ++i)
            for (int j = 0; j < spec.np; ++j)
                g.w[static_cast<std::size_t>(i) * spec.np + j] =
                    wigner_point(rho_ph, cnk, g.x[i], g.p[j]);
    } else {
        for (int i = 0; i < spec.nx; ++i)
            for (int j = 0; j < spec.np; ++j)
                g.w[static_cast<std::size_t>(i) * spec.np + j] =
                    wigner_point(rho_ph, cnk, g.x[i], g.p[j]);
    }

    double norm = g.integral();
    if (std::fabs(norm - 1.0) > 0.01)
        throw Error("grid-truncation",
                    "Wigner grid captures " + std::to_string(norm) + " of the norm");
    return g;
}

WignerGrid wigner_photon(const DensityMatrix& dm, const WignerGridSpec& spec, Exec e) {
    return wigner_photon(reduce_photon(dm), spec, e);
}

WignerGrid mixture_wigner(const std::vector<double>& weights,
                          const std::vector<WignerGrid>& grids) {
    if (weights.size() != grids.size() || grids.empty())
        throw Error("bad-params", "one weight per grid required");
    const WignerGrid& g0 = grids.front();
    for (const auto& g : grids) {
        if (g.x.size() != g0.x.size() || g.p.size() != g0.p.size())
            throw Error("bad-params", "mixture grids must share axes");
        for (std::size_t i = 0; i < g.x.size(); ++i)
            if (std::fabs(g.x[i] - g0.x[i]) > 1e-12)
                throw Error("bad-params", "mixture grids must share axes");
        for (std::size_t i = 0; i < g.p.size(); ++i)
            if (std::fabs(g.p[i] - g0.p[i]) > 1e-12)
                throw Error("bad-params", "mixture grids must share axes");
    }
    WignerGrid out;
    out.x = g0.x;
    out.p = g0.p;
    out.w.assign(g0.w.size(), 0.0);
    for (std::size_t s = 0; s < grids.size(); ++s)
        for (std::size_t i = 0; i < out.w.size(); ++i) out.w[i] += weights[s] * grids[s].w[i];
    return out;
}

} // namespace dicke
