#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "dicke/operators.hpp"

using namespace dicke;

namespace {

Eigen::MatrixXcd dense_of(const CsrMatrix& a) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(a.rows, a.cols);
    for (int r = 0; r < a.rows; ++r)
        for (std::int64_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            m(r, a.col[k]) += a.val[k];
    return m;
}

} // namespace

TEST_CASE("spin commutator and casimir on the product basis") {
    for (int two_s : {1, 2, 4, 7}) {
        SpinSubspace sub(two_s, two_s);
        OperatorSet ops = build_operators(sub, 3);
        Eigen::MatrixXcd sx = dense_of(ops.sx), sy = dense_of(ops.sy), sz = dense_of(ops.sz);
        Eigen::MatrixXcd comm = sx * sy - sy * sx - cdouble(0, 1) * sz;
        CHECK(comm.norm() / std::max(1.0, sz.norm()) < 1e-12);

        Eigen::MatrixXcd s2 = dense_of(ops.s2);
        double want = sub.casimir();
        Eigen::MatrixXcd dev =
            s2 - want * Eigen::MatrixXcd::Identity(ops.dim, ops.dim);
        CHECK(dev.norm() < 1e-10 * std::max(1.0, want));
    }
}

TEST_CASE("photon commutator on the untruncated block") {
    SpinSubspace sub(2, 2);
    const int n_max = 6;
    OperatorSet ops = build_operators(sub, n_max);
    Eigen::MatrixXcd a = dense_of(ops.a), ad = dense_of(ops.adag);
    Eigen::MatrixXcd comm = a * ad - ad * a;
    // rows/cols with photon index < n_max must satisfy [a, a^dag] = 1
    for (int m = 0; m < sub.dimension(); ++m)
        for (int n = 0; n < n_max; ++n) {
            int i = m * (n_max + 1) + n;
            CHECK(std::abs(comm(i, i) - cdouble(1, 0)) < 1e-13);
        }
}

TEST_CASE("hamiltonian structure") {
    ModelParams p;
    p.omega_c = 1.0;
    p.omega_0 = 0.5;
    p.kappa = 1.0;
    p.n_atoms = 2;
    SpinSubspace sub(2, 2);  // S = 1

    SUBCASE("g = 0 is diagonal with omega_c n + 2 omega_0 M") {
        p.g = 0.0;
        OperatorSet ops = build_operators(sub, 3);
        Eigen::MatrixXcd h = dense_of(build_hamiltonian(p, ops));
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n <= 3; ++n) {
                int i = m * 4 + n;
                double want = p.omega_c * n + 2.0 * p.omega_0 * (m - 1.0);
                CHECK(std::abs(h(i, i) - cdouble(want, 0)) < 1e-13);
            }
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                if (i != j) CHECK(std::abs(h(i, j)) < 1e-14);
    }

    SUBCASE("ladder matrix element < 1,0;1 | H | 1,-1;0 > = g") {
        p.g = 0.73;
        OperatorSet ops = build_operators(sub, 1);
        Eigen::MatrixXcd h = dense_of(build_hamiltonian(p, ops));
        // M-major, n_max=1: |1,-1;0> -> 0, |1,0;1> -> 1*2+1 = 3
        CHECK(std::abs(h(3, 0) - cdouble(p.g, 0)) < 1e-13);
    }

    SUBCASE("hermitian for random parameters") {
        p.g = 1.37;
        p.omega_c = 0.8;
        p.omega_0 = 1.9;
        OperatorSet ops = build_operators(sub, 5);
        Eigen::MatrixXcd h = dense_of(build_hamiltonian(p, ops));
        CHECK((h - h.adjoint()).norm() < 1e-12 * h.norm());
    }
}

TEST_CASE("dimension cap guard") {
    SpinSubspace sub(40, 40);
    CHECK_THROWS_WITH_AS((void)build_operators(sub, 2000, 20000),
                         doctest::Contains("dimension"), Error);
}

TEST_CASE("full-space operators") {
    FullSpaceOperators ops = build_full_space(3, 2);

    SUBCASE("pauli algebra per atom") {
        for (int at = 0; at < 3; ++at) {
            Eigen::MatrixXcd sz = dense_of(ops.sigma_z[at]);
            Eigen::MatrixXcd z2 = sz * sz;
            CHECK((z2 - Eigen::MatrixXcd::Identity(ops.dim, ops.dim)).norm() < 1e-13);
        }
        // different atoms commute
        Eigen::MatrixXcd a0 = dense_of(ops.sigma_m[0]), z1 = dense_of(ops.sigma_z[1]);
        CHECK((a0 * z1 - z1 * a0).norm() < 1e-13);
    }

    SUBCASE("permutation symmetry of the hamiltonian") {
        ModelParams p;
        p.n_atoms = 3;
        p.g = 0.9;
        Eigen::MatrixXcd h = dense_of(full_hamiltonian(p, ops));
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                Eigen::MatrixXcd pm = dense_of(ops.permutation(i, j));
                CHECK((pm * h * pm.adjoint() - h).norm() < 1e-12 * h.norm());
            }
    }

    SUBCASE("collective casimir spectrum") {
        Eigen::MatrixXcd s2 = dense_of(ops.s2_spin_only);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s2);
        // N=3: S in {1/2, 3/2} -> S(S+1) in {0.75, 3.75}
        for (int i = 0; i < 8; ++i) {
            double ev = es.eigenvalues()(i);
            CHECK((std::fabs(ev - 0.75) < 1e-10 || std::fabs(ev - 3.75) < 1e-10));
        }
    }

    CHECK_THROWS_AS((void)build_full_space(5, 2), Error);
}
