#include "dicke/dpt.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace dicke {

double CouplingMatrix::entry(int r, int c) const {
    if (r == c) return diag[r];
    if (r == c + 1) return lower[c];
    if (r + 1 == c) return upper[r];
    return 0.0;
}

double CouplingMatrix::max_abs() const {
    double m = 0.0;
    for (double v : diag) m = std::max(m, std::fabs(v));
    for (double v : upper) m = std::max(m, std::fabs(v));
    for (double v : lower) m = std::max(m, std::fabs(v));
    return m;
}

std::vector<double> CouplingMatrix::column_sums() const {
    const int n = size();
    std::vector<double> s(n, 0.0);
    for (int j = 0; j < n; ++j) {
        s[j] = diag[j];
        if (j + 1 < n) s[j] += lower[j];
        if (j > 0) s[j] += upper[j - 1];
    }
    return s;
}

void CouplingMatrix::enforce_conservation() {
    const int n = size();
    for (int j = 0; j < n; ++j) {
        double off = 0.0;
        if (j + 1 < n) off += lower[j];
        if (j > 0) off += upper[j - 1];
        diag[j] = -off;
    }
}

namespace {

enum class Channel { Dephasing, Decay };

CouplingMatrix build_coupling(const MomentTable& raw, int n_atoms, Channel ch) {
    MomentTable mom = validate_table(raw, n_atoms);
    for (const auto& m : mom) m.check_cone();

    CouplingMatrix c;
    c.n_atoms = n_atoms;
    c.subspaces = enumerate_subspaces(n_atoms);
    c.gamma = 1.0;
    c.f = ch == Channel::Dephasing ? 1.0 : 0.0;
    const int n = static_cast<int>(c.subspaces.size());
    c.diag.assign(n, 0.0);
    c.upper.assign(n > 0 ? n - 1 : 0, 0.0);
    c.lower.assign(n > 0 ? n - 1 : 0, 0.0);

    const double n2 = 0.5 * n_atoms;
    const double rate_floor = -1e-8 * std::max(1.0, static_cast<double>(n_atoms));

    for (int j = 0; j < n; ++j) {
        const double s = c.subspaces[j].spin();
        const double z = mom[j].sz2_mean;
        const double m = mom[j].sz_mean;

        // diagonal; the S=0 (and S=1/2) bracket is 0/0 with an identically
        // vanishing numerator and is defined as 0
        if (ch == Channel::Dephasing) {
            double frac = s > 0.0 ? (n2 + 1.0) / (2.0 * s * (s + 1.0)) * z : 0.0;
            c.diag[j] = frac - 0.5 * n2;
        } else {
            double frac =
                s > 0.0 ? (n2 + 1.0) / (2.0 * s * (s + 1.0)) * (s * (s + 1.0) - z + m) : 0.0;
            c.diag[j] = frac - m - n_atoms * 0.5;
        }

        // upward rate out of sector j, lands in row j+1
        if (j + 1 < n) {
            double coeff = (n2 - s) / (2.0 * (s + 1.0) * (2.0 * s + 1.0));
            double bracket = ch == Channel::Dephasing
                                 ? (s + 1.0) * (s + 1.0) - z
                                 : (s + 1.0) * (s + 2.0) + z - (2.0 * s + 3.0) * m;
            double rate = coeff * bracket;
            if (rate < rate_floor)
                throw Error("moment-cone", "negative upward rate out of 2S=" +
                                               std::to_string(c.subspaces[j].two_s));
            c.lower[j] = std::max(0.0, rate);
        }

        // downward rate out of sector j, lands in row j-1
        if (j > 0) {
            double coeff = (n2 + s + 1.0) / (2.0 * s * (2.0 * s + 1.0));
            double bracket = ch == Channel::Dephasing
                                 ? s * s - z
                                 : (s - 1.0) * s + z + (2.0 * s - 1.0) * m;
            double rate = coeff * bracket;
            if (rate < rate_floor)
                throw Error("moment-cone", "negative downward rate out of 2S=" +
                                               std::to_string(c.subspaces[j].two_s));
            c.upper[j - 1] = std::max(0.0, rate);
        }
    }
    return c;
}

} // namespace

CouplingMatrix coupling_dephasing(const MomentTable& moments, int n_atoms) {
    return build_coupling(moments, n_atoms, Channel::Dephasing);
}

CouplingMatrix coupling_decay(const MomentTable& moments, int n_atoms) {
    return build_coupling(moments, n_atoms, Channel::Decay);
}

CouplingMatrix mix(const CouplingMatrix& o_phi, const CouplingMatrix& o_down,
                   const PerturbationSpec& pert) {
    pert.validate();
    if (o_phi.size() != o_down.size() || o_phi.n_atoms != o_down.n_atoms)
        throw Error("dimension-mismatch", "phi and decay matrices differ in size");
    CouplingMatrix c = o_phi;
    const double wp = pert.gamma_phi();
    const double wd = pert.gamma_down();
    for (int i = 0; i < c.size(); ++i) c.diag[i] = wp * o_phi.diag[i] + wd * o_down.diag[i];
    for (std::size_t i = 0; i < c.upper.size(); ++i) {
        c.upper[i] = wp * o_phi.upper[i] + wd * o_down.upper[i];
        c.lower[i] = wp * o_phi.lower[i] + wd * o_down.lower[i];
    }
    c.gamma = pert.gamma;
    c.f = pert.f;
    return c;
}

SpinDistribution null_distribution(const CouplingMatrix& c) {
    const int n = c.size();
    if (n == 0) throw Error("dimension-mismatch", "empty coupling matrix");
    SpinDistribution dist;
    dist.n_atoms = c.n_atoms;
    dist.subspaces = c.subspaces;
    dist.p.assign(n, 0.0);
    if (n == 1) {
        dist.p[0] = 1.0;
        return dist;
    }

    const double scale = std::max(c.max_abs(), 1e-300);
    const double pivot_floor = 1e-14 * scale;

    // Stationarity rows 1..n-1 placed first (row r covers columns r..r+2),
    // the normalization row sum(p)=1 carried last and eliminated against
    // each pivot. This is the "one row replaced by the constraint" solve,
    // ordered so the band structure survives.
    std::vector<double> b0(n, 0.0), b1(n, 0.0), b2(n, 0.0);  // bands of rows 0..n-2
    for (int r = 0; r < n - 1; ++r) {
        b0[r] = c.lower[r];                      // col r
        b1[r] = c.diag[r + 1];                   // col r+1
        b2[r] = (r + 2 < n) ? c.upper[r + 1] : 0.0;  // col r+2
    }
    std::vector<double> last(n, 1.0);
    double rhs_last = 1.0;

    for (int k = 0; k < n - 1; ++k) {
        double piv = b0[k];
        if (std::fabs(piv) <= pivot_floor)
            throw Error("non-unique-null",
                        "zero transition rate disconnects the sector chain at index " +
                            std::to_string(k));
        double m = last[k] / piv;
        last[k] = 0.0;
        last[k + 1] -= m * b1[k];
        if (k + 2 < n) last[k + 2] -= m * b2[k];
        // rhs of stationarity rows is zero, rhs_last unchanged
    }
    if (std::fabs(last[n - 1]) <= 1e-300)
        throw Error("non-unique-null", "normalization row eliminated to zero");

    dist.p[n - 1] = rhs_last / last[n - 1];
    for (int k = n - 2; k >= 0; --k) {
        double acc = -b1[k] * dist.p[k + 1];
        if (k + 2 < n) acc -= b2[k] * dist.p[k + 2];
        dist.p[k] = acc / b0[k];
    }

    double clamp = 0.0, total = 0.0;
    for (double& v : dist.p) {
        if (v < 0.0) {
            clamp = std::max(clamp, -v);
            v = 0.0;
        }
        total += v;
    }
    if (total <= 0.0) throw Error("non-unique-null", "null vector has no positive mass");
    for (double& v : dist.p) v /= total;
    dist.max_clamp = clamp;
    return dist;
}

namespace {

// Sturm count: number of eigenvalues of the symmetric tridiagonal (d, e)
// strictly below x.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
    const int n = static_cast<int>(d.size());
    int count = 0;
    double q = d[0] - x;
    if (q < 0) ++count;
    for (int i = 1; i < n; ++i) {
        double den = (std::fabs(q) < 1e-300) ? std::copysign(1e-300, q == 0.0 ? -1.0 : q) : q;
        q = d[i] - x - e[i - 1] * e[i - 1] / den;
        if (q < 0) ++count;
    }
    return count;
}

// kth largest eigenvalue (k=0 -> largest) by bisection.
double sturm_bisect(const std::vector<double>& d, const std::vector<double>& e, int k) {
    const int n = static_cast<int>(d.size());
    double lo = d[0], hi = d[0];
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(e[i - 1]);
        if (i < n - 1) r += std::fabs(e[i]);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    const int want = n - 1 - k;  // index in ascending order
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(lo) + std::fabs(hi));
         ++it) {
        double mid = 0.5 * (lo + hi);
        if (sturm_count(d, e, mid) <= want)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Solve (T - shift) x = rhs for tridiagonal T given by bands, with partial
// pivoting between adjacent rows (fill widens the upper band to 2).
std::vector<double> tridiag_shifted_solve(const std::vector<double>& lower,
                                          const std::vector<double>& diag,
                                          const std::vector<double>& upper, double shift,
                                          std::vector<double> rhs) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> a(n, 0.0), b(n, 0.0), c2(n, 0.0);
    for (int i = 0; i < n; ++i) {
        a[i] = diag[i] - shift;
        if (i + 1 < n) b[i] = upper[i];
    }
    std::vector<double> sub(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) sub[i] = lower[i];

    for (int k = 0; k + 1 < n; ++k) {
        if (std::fabs(sub[k]) > std::fabs(a[k])) {
            std::swap(a[k], sub[k]);
            double bk1 = a[k + 1];
            a[k + 1] = b[k];
            b[k] = bk1;
            std::swap(c2[k], b[k + 1]);  // c2[k] was 0; row k+1 has no c2 yet
            std::swap(rhs[k], rhs[k + 1]);
        }
        if (std::fabs(a[k]) < 1e-300) a[k] = 1e-300;
        double m = sub[k] / a[k];
        a[k + 1] -= m * b[k];
        b[k + 1] -= m * c2[k];
        rhs[k + 1] -= m * rhs[k];
    }
    if (std::fabs(a[n - 1]) < 1e-300) a[n - 1] = 1e-300;
    std::vector<double> x(n, 0.0);
    x[n - 1] = rhs[n - 1] / a[n - 1];
    if (n >= 2) x[n - 2] = (rhs[n - 2] - b[n - 2] * x[n - 1]) / a[n - 2];
    for (int k = n - 3; k >= 0; --k)
        x[k] = (rhs[k] - b[k] * x[k + 1] - c2[k] * x[k + 2]) / a[k];
    return x;
}

std::vector<double> inverse_iteration(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper, double lambda,
                                      std::uint64_t seed) {
    const int n = static_cast<int>(diag.size());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = uni(rng);
    double scale = 0.0;
    for (double v : diag) scale = std::max(scale, std::fabs(v));
    const double shift = lambda + 1e-13 * std::max(1.0, scale);
    for (int it = 0; it < 4; ++it) {
        x = tridiag_shifted_solve(lower, diag, upper, shift, std::move(x));
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (double& v : x) v /= nrm;
    }
    return x;
}

} // namespace

LiouvillianSpectrum slow_spectrum(const CouplingMatrix& c, int k) {
    const int n = c.size();
    if (k < 1 || k > n) throw Error("bad-params", "requested eigencount outside [1, N_S]");

    LiouvillianSpectrum spec;
    spec.source = "dpt";

    bool symmetrizable = true;
    for (int i = 0; i + 1 < n; ++i)
        if (c.upper[i] * c.lower[i] < -1e-14 * std::max(1.0, c.max_abs() * c.max_abs()))
            symmetrizable = false;

    if (symmetrizable) {
        std::vector<double> e(std::max(0, n - 1), 0.0);
        for (int i = 0; i + 1 < n; ++i) e[i] = std::sqrt(std::max(0.0, c.upper[i] * c.lower[i]));
        for (int j = 0; j < k; ++j) {
            double lam = sturm_bisect(c.diag, e, j);
            spec.lambda.push_back(cdouble(lam, 0.0));
            std::vector<double> v =
                inverse_iteration(c.lower, c.diag, c.upper, lam, 0xabcdu + 7919u * j);
            // left vector of C = right vector of C^T (bands swapped)
            std::vector<double> w =
                inverse_iteration(c.upper, c.diag, c.lower, lam, 0x1234u + 104729u * j);
            // fix the overall sign so the largest-magnitude entry is positive
            auto orient = [](std::vector<double>& u) {
                int imax = 0;
                for (std::size_t t = 1; t < u.size(); ++t)
                    if (std::fabs(u[t]) > std::fabs(u[imax])) imax = static_cast<int>(t);
                if (u[imax] < 0.0)
                    for (double& vv : u) vv = -vv;
            };
            orient(v);
            orient(w);
            spec.right_vec.push_back(std::move(v));
            spec.left_vec.push_back(std::move(w));
        }
        return spec;
    }

    if (n > 4000)
        throw Error("spectrum-failure",
                    "non-symmetrizable coupling matrix too large for the dense path");
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dense(i, j) = c.entry(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success)
        throw Error("spectrum-failure", "dense eigensolver did not converge");
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()(a).real() > es.eigenvalues()(b).real();
    });
    for (int j = 0; j < k; ++j) {
        spec.lambda.push_back(es.eigenvalues()(order[j]));
        Eigen::VectorXcd v = es.eigenvectors().col(order[j]);
        std::vector<double> vr(n);
        for (int i = 0; i < n; ++i) vr[i] = v(i).real();
        spec.right_vec.push_back(std::move(vr));
        spec.left_vec.emplace_back();
    }
    return spec;
}

double mean_normalized_spin(const SpinDistribution& dist) {
    double s = 0.0;
    for (int i = 0; i < dist.size(); ++i) s += dist.p[i] * dist.subspaces[i].s_tilde();
    return s;
}

WignerGrid mixture_wigner(const SpinDistribution& p, const std::vector<WignerGrid>& per_s) {
    if (static_cast<int>(per_s.size()) != p.size())
        throw Error("bad-params", "one Wigner grid per sector required");
    return mixture_wigner(p.p, per_s);
}

int sign_changes(const std::vector<double>& v, double floor) {
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::fabs(x));
    const double cut = floor * vmax;
    int changes = 0;
    int last_sign = 0;
    for (double x : v) {
        if (std::fabs(x) <= cut) continue;
        int s = x > 0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++changes;
        last_sign = s;
    }
    return changes;
}

} // namespace dicke
