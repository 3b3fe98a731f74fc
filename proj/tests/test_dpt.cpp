#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "dicke/dpt.hpp"

using namespace dicke;

namespace {

SubspaceMoments make_moments(int two_s, int n, double m, double z) {
    SubspaceMoments mom;
    mom.two_s = two_s;
    mom.n_atoms = n;
    mom.sz_mean = m;
    mom.sz2_mean = z;
    mom.method = "mf2";
    mom.converged = true;
    return mom;
}

// moments of a random diagonal M-ensemble: automatically cone-respecting and
// consistent with the ladder discreteness bounds any quantum state obeys
MomentTable random_ensemble_moments(int n_atoms, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MomentTable t;
    for (const auto& sub : enumerate_subspaces(n_atoms)) {
        double wsum = 0.0, m = 0.0, z = 0.0;
        for (int k = 0; k <= sub.two_s; ++k) {
            double w = u(rng) + 1e-12;
            double mval = -sub.spin() + k;
            wsum += w;
            m += w * mval;
            z += w * mval * mval;
        }
        t.push_back(make_moments(sub.two_s, n_atoms, m / wsum, z / wsum));
    }
    return t;
}

} // namespace

TEST_CASE("dephasing matrix hand values at N=2") {
    // all-down triplet: <Sz^2>_1 = 1
    MomentTable t = {make_moments(0, 2, 0.0, 0.0), make_moments(2, 2, -1.0, 1.0)};
    CouplingMatrix c = coupling_dephasing(t, 2);
    REQUIRE(c.size() == 2);
    CHECK(c.entry(1, 1) == doctest::Approx(0.0));       // (2/4)*1 - 1/2
    CHECK(c.entry(0, 1) == doctest::Approx(0.0));       // bracket 1 - 1
    CHECK(c.entry(1, 0) == doctest::Approx(0.5));       // up-rate out of the singlet
    CHECK(c.entry(0, 0) == doctest::Approx(-0.5));      // column sums to zero
    auto sums = c.column_sums();
    CHECK(std::fabs(sums[0]) < 1e-14);
    CHECK(std::fabs(sums[1]) < 1e-14);
}

TEST_CASE("decay matrix hand values at N=2") {
    MomentTable t = {make_moments(0, 2, 0.0, 0.0), make_moments(2, 2, -0.3, 0.6)};
    CouplingMatrix c = coupling_decay(t, 2);
    CHECK(c.entry(1, 0) == doctest::Approx(1.0));   // (1/2)[2 + 0 - 0]
    CHECK(c.entry(0, 0) == doctest::Approx(-1.0));  // -N/2
    auto sums = c.column_sums();
    CHECK(std::fabs(sums[0]) < 1e-14);
    CHECK(std::fabs(sums[1]) < 1e-14);
}

TEST_CASE("decay leaks nothing downward from the all-down extreme") {
    // <Sz>_S = -S, <Sz^2>_S = S^2: the downward bracket (S-1)S + S^2 - (2S-1)S
    // vanishes identically (the product ground state is dark to local decay)
    const int n = 6;
    MomentTable t;
    for (const auto& sub : enumerate_subspaces(n))
        t.push_back(make_moments(sub.two_s, n, -sub.spin(), sub.spin() * sub.spin()));
    CouplingMatrix c = coupling_decay(t, n);
    for (int j = 1; j < c.size(); ++j) CHECK(std::fabs(c.entry(j - 1, j)) < 1e-13);
}

TEST_CASE("column sums vanish for random ensemble moments") {
    std::mt19937_64 rng(2024);
    for (int n : {2, 5, 17, 40, 200}) {
        for (int rep = 0; rep < 40; ++rep) {
            MomentTable t = random_ensemble_moments(n, rng);
            for (auto build : {coupling_dephasing, coupling_decay}) {
                CouplingMatrix c = build(t, n);
                double scale = std::max(1.0, c.max_abs());
                for (double s : c.column_sums()) CHECK(std::fabs(s) <= 1e-10 * scale);
                for (double v : c.upper) CHECK(v >= -1e-12 * scale);
                for (double v : c.lower) CHECK(v >= -1e-12 * scale);
            }
        }
    }
}

TEST_CASE("odd N boundary sector") {
    std::mt19937_64 rng(11);
    MomentTable t = random_ensemble_moments(5, rng);
    // S = 1/2 has <Sz^2> = 1/4 forced
    CHECK(t[0].sz2_mean == doctest::Approx(0.25));
    CouplingMatrix c = coupling_dephasing(t, 5);
    for (double s : c.column_sums()) CHECK(std::fabs(s) < 1e-12);
    CHECK(c.entry(1, 0) > 0.0);  // the chain connects upward out of S_min
}

TEST_CASE("builder rejects bad inputs") {
    MomentTable missing = {make_moments(0, 4, 0.0, 0.0), make_moments(2, 4, 0.0, 0.5)};
    CHECK_THROWS_WITH_AS((void)coupling_dephasing(missing, 4), doctest::Contains("missing"),
                         Error);
    MomentTable bad = {make_moments(0, 2, 0.0, 0.0), make_moments(2, 2, 0.0, 1.9)};
    CHECK_THROWS_WITH_AS((void)coupling_dephasing(bad, 2), doctest::Contains("moment-cone"),
                         Error);
}

TEST_CASE("mix endpoints and scaling") {
    std::mt19937_64 rng(5);
    MomentTable t = random_ensemble_moments(9, rng);
    CouplingMatrix op = coupling_dephasing(t, 9);
    CouplingMatrix od = coupling_decay(t, 9);

    CouplingMatrix c1 = mix(op, od, PerturbationSpec{0.02, 1.0});
    CouplingMatrix c0 = mix(op, od, PerturbationSpec{0.02, 0.0});
    for (int i = 0; i < c1.size(); ++i) {
        CHECK(c1.diag[i] == doctest::Approx(0.02 * op.diag[i]));
        CHECK(c0.diag[i] == doctest::Approx(0.02 * od.diag[i]));
    }

    // eigenvalues scale linearly in gamma, eigenvectors unchanged
    CouplingMatrix ca = mix(op, od, PerturbationSpec{1.0, 0.4});
    CouplingMatrix cb = mix(op, od, PerturbationSpec{3.5, 0.4});
    LiouvillianSpectrum sa = slow_spectrum(ca, 4);
    LiouvillianSpectrum sb = slow_spectrum(cb, 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(sb.lambda[i].real() == doctest::Approx(3.5 * sa.lambda[i].real()).epsilon(1e-9));
        for (std::size_t j = 0; j < sa.right_vec[i].size(); ++j)
            CHECK(sb.right_vec[i][j] == doctest::Approx(sa.right_vec[i][j]).epsilon(1e-7));
    }
}

TEST_CASE("two-state detailed balance") {
    CouplingMatrix c;
    c.n_atoms = 2;
    c.subspaces = enumerate_subspaces(2);
    const double a = 0.7, b = 0.25;
    c.diag = {-a, -b};
    c.lower = {a};
    c.upper = {b};
    c.gamma = 1.0;
    SpinDistribution p = null_distribution(c);
    CHECK(p.p[0] == doctest::Approx(b / (a + b)).epsilon(1e-14));
    CHECK(p.p[1] == doctest::Approx(a / (a + b)).epsilon(1e-14));
}

TEST_CASE("null vector obeys flux balance on random chains") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int n : {3, 11, 101, 1001}) {
        CouplingMatrix c;
        c.n_atoms = 2 * (n - 1);
        c.subspaces = enumerate_subspaces(c.n_atoms);
        c.lower.resize(n - 1);
        c.upper.resize(n - 1);
        c.diag.assign(n, 0.0);
        for (int i = 0; i + 1 < n; ++i) {
            c.lower[i] = u(rng);
            c.upper[i] = u(rng);
        }
        c.enforce_conservation();
        SpinDistribution p = null_distribution(c);
        double sum = 0.0;
        for (double v : p.p) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        // flux balance, measured against the largest flux in the chain (the
        // deep tail carries absolute roundoff from the back-substitution)
        double fmax = 0.0;
        for (int i = 0; i + 1 < n; ++i)
            fmax = std::max(fmax, std::fabs(c.lower[i] * p.p[i]));
        for (int i = 0; i + 1 < n; ++i)
            CHECK(std::fabs(c.lower[i] * p.p[i] - c.upper[i] * p.p[i + 1]) <= 1e-10 * fmax);
    }
}

TEST_CASE("null solve detects a disconnected chain") {
    CouplingMatrix c;
    c.n_atoms = 4;
    c.subspaces = enumerate_subspaces(4);
    c.diag = {0.0, 0.0, 0.0};
    c.lower = {0.0, 0.0};
    c.upper = {0.0, 0.0};
    CHECK_THROWS_WITH_AS((void)null_distribution(c), doctest::Contains("non-unique"), Error);
}

TEST_CASE("slow spectrum against a dense reference") {
    std::mt19937_64 rng(23);
    MomentTable t = random_ensemble_moments(30, rng);
    CouplingMatrix op = coupling_dephasing(t, 30);
    CouplingMatrix od = coupling_decay(t, 30);
    CouplingMatrix c = mix(op, od, PerturbationSpec{0.01, 0.6});
    const int n = c.size();

    LiouvillianSpectrum spec = slow_spectrum(c, 6);
    REQUIRE(spec.lambda.size() == 6);

    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dense(i, j) = c.entry(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> es(dense);
    std::vector<double> re(n);
    for (int i = 0; i < n; ++i) re[i] = es.eigenvalues()(i).real();
    std::sort(re.begin(), re.end(), std::greater<>());

    double scale = c.max_abs();
    for (int i = 0; i < 6; ++i) {
        CHECK(std::fabs(spec.lambda[i].imag()) < 1e-12 * scale);
        CHECK(spec.lambda[i].real() == doctest::Approx(re[i]).epsilon(1e-8).scale(scale));
        CHECK(spec.lambda[i].real() <= 1e-10 * scale);
        // eigenpair residual
        const auto& v = spec.right_vec[i];
        double res = 0.0;
        for (int r = 0; r < n; ++r) {
            double acc = -spec.lambda[i].real() * v[r];
            for (int jc = std::max(0, r - 1); jc <= std::min(n - 1, r + 1); ++jc)
                acc += c.entry(r, jc) * v[jc];
            res += acc * acc;
        }
        CHECK(std::sqrt(res) < 1e-8 * std::max(1.0, scale));
        // left/right biorthogonality across distinct eigenvalues
        for (int j2 = 0; j2 < 6; ++j2) {
            if (j2 == i) continue;
            double dot = 0.0;
            for (int r = 0; r < n; ++r) dot += spec.left_vec[j2][r] * v[r];
            CHECK(std::fabs(dot) < 1e-6);
        }
    }
    // exactly one near-zero eigenvalue
    int zeros = 0;
    for (const auto& l : spec.lambda)
        if (std::fabs(l.real()) <= 1e-10 * scale) ++zeros;
    CHECK(zeros == 1);
}

TEST_CASE("node counting") {
    CHECK(sign_changes({1.0, 2.0, 0.5}) == 0);
    CHECK(sign_changes({1.0, -2.0, 0.5}) == 2);
    CHECK(sign_changes({1.0, 1e-16, -1.0}) == 1);
    CHECK(sign_changes({-1.0, 1.0, -1.0, 1.0}) == 3);
}

TEST_CASE("mean normalized spin endpoints") {
    SpinDistribution p;
    p.n_atoms = 8;
    p.subspaces = enumerate_subspaces(8);
    p.p.assign(5, 0.0);
    p.p[4] = 1.0;  // delta at S = N/2
    CHECK(mean_normalized_spin(p) == doctest::Approx(1.0));
    p.p[4] = 0.0;
    p.p[0] = 1.0;  // delta at S_min = 0
    CHECK(mean_normalized_spin(p) == doctest::Approx(0.0));
}
