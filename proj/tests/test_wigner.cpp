#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dicke/wigner.hpp"

using namespace dicke;

namespace {

Eigen::MatrixXcd coherent_state(cdouble alpha, int nf) {
    Eigen::VectorXcd psi(nf);
    cdouble amp = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < nf; ++n) {
        psi(n) = amp;
        amp *= alpha / std::sqrt(n + 1.0);
    }
    return psi * psi.adjoint();
}

} // namespace

TEST_CASE("vacuum wigner function") {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(6, 6);
    rho(0, 0) = 1.0;
    WignerGridSpec spec;
    spec.nx = spec.np = 121;
    spec.extent = 5.0;
    WignerGrid g = wigner_photon(rho, spec, Exec::Serial);

    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-6));
    // center value 1/pi
    int ic = 60;
    CHECK(g.value(ic, ic) == doctest::Approx(1.0 / M_PI).epsilon(1e-10));
    // gaussian profile e^{-x^2-p^2}
    double x = g.x[80];
    CHECK(g.value(80, ic) == doctest::Approx(std::exp(-x * x) / M_PI).epsilon(1e-8));
    CHECK(g.local_maxima() == 1);
}

TEST_CASE("coherent state sits at sqrt(2) Re alpha") {
    const cdouble alpha(1.8, 0.0);
    Eigen::MatrixXcd rho = coherent_state(alpha, 24);
    WignerGridSpec spec;
    spec.nx = spec.np = 161;
    spec.extent = 7.0;
    WignerGrid g = wigner_photon(rho, spec);
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-4));

    double best = -1.0;
    double bx = 0, bp = 0;
    for (std::size_t i = 0; i < g.x.size(); ++i)
        for (std::size_t j = 0; j < g.p.size(); ++j)
            if (g.value(i, j) > best) {
                best = g.value(i, j);
                bx = g.x[i];
                bp = g.p[j];
            }
    CHECK(bx == doctest::Approx(std::sqrt(2.0) * alpha.real()).epsilon(0.02));
    CHECK(std::fabs(bp) < 0.1);
    CHECK(best == doctest::Approx(1.0 / M_PI).epsilon(1e-3));  // peak sits off-node
}

TEST_CASE("two-lobe mixture and convexity") {
    const cdouble alpha(2.2, 0.0);
    WignerGridSpec spec;
    spec.nx = spec.np = 161;
    spec.extent = 8.0;
    WignerGrid gp = wigner_photon(coherent_state(alpha, 30), spec);
    WignerGrid gm = wigner_photon(coherent_state(-alpha, 30), spec);
    WignerGrid mixed = mixture_wigner({0.5, 0.5}, {gp, gm});

    CHECK(mixed.integral() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(mixed.local_maxima() == 2);

    double min_parts = 1e300;
    for (double v : gp.w) min_parts = std::min(min_parts, v);
    for (double v : gm.w) min_parts = std::min(min_parts, v);
    double min_mixed = 1e300;
    for (double v : mixed.w) min_mixed = std::min(min_mixed, v);
    CHECK(min_mixed >= min_parts - 1e-15);

    // delta weight returns the component unchanged
    WignerGrid same = mixture_wigner({1.0, 0.0}, {gp, gm});
    for (std::size_t i = 0; i < same.w.size(); ++i)
        CHECK(same.w[i] == doctest::Approx(gp.w[i]).epsilon(1e-14));
}

TEST_CASE("grid truncation is detected") {
    Eigen::MatrixXcd rho = coherent_state(cdouble(2.5, 0.0), 30);
    WignerGridSpec tiny;
    tiny.nx = tiny.np = 41;
    tiny.extent = 1.0;
    CHECK_THROWS_WITH_AS((void)wigner_photon(rho, tiny), doctest::Contains("grid"), Error);
}

TEST_CASE("mismatched axes are rejected") {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(0, 0) = 1.0;
    WignerGridSpec a;
    a.extent = 5.0;
    WignerGridSpec b;
    b.extent = 6.0;
    WignerGrid ga = wigner_photon(rho, a);
    WignerGrid gb = wigner_photon(rho, b);
    CHECK_THROWS_AS((void)mixture_wigner({0.5, 0.5}, {ga, gb}), Error);
}
