#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dicke/model.hpp"

using namespace dicke;

TEST_CASE("subspace enumeration") {
    auto s4 = enumerate_subspaces(4);
    REQUIRE(s4.size() == 3);
    CHECK(s4[0].two_s == 0);
    CHECK(s4[1].two_s == 2);
    CHECK(s4[2].two_s == 4);

    auto s5 = enumerate_subspaces(5);
    REQUIRE(s5.size() == 3);
    CHECK(s5[0].two_s == 1);
    CHECK(s5[1].two_s == 3);
    CHECK(s5[2].two_s == 5);
    CHECK(s5[0].spin() == doctest::Approx(0.5));

    auto s40 = enumerate_subspaces(40);
    REQUIRE(s40.size() == 21);
    CHECK(s40[0].s_tilde() == doctest::Approx(0.0));
    CHECK(s40[1].s_tilde() == doctest::Approx(0.05));
    CHECK(s40[20].s_tilde() == doctest::Approx(1.0));

    CHECK_THROWS_WITH_AS(enumerate_subspaces(0), doctest::Contains("n_atoms"), Error);

    for (int n = 1; n <= 1000; ++n)
        REQUIRE(static_cast<int>(enumerate_subspaces(n).size()) == n / 2 + 1);
}

TEST_CASE("degeneracy closed form and Hilbert dimension count") {
    CHECK(degeneracy(SpinSubspace(4, 4)).value == doctest::Approx(1.0));
    CHECK(degeneracy(SpinSubspace(2, 4)).value == doctest::Approx(3.0));
    CHECK(degeneracy(SpinSubspace(0, 4)).value == doctest::Approx(2.0));

    for (int n = 2; n <= 20; ++n) {
        double total = 0.0;
        for (const auto& sub : enumerate_subspaces(n))
            total += degeneracy(sub).value * (sub.two_s + 1);
        CHECK(total == doctest::Approx(std::pow(2.0, n)).epsilon(1e-12));
    }

    // beyond 64-bit: exact digits still consistent with the double value
    Degeneracy big = degeneracy(SpinSubspace(10, 100));
    CHECK(big.digits.size() > 15);
    CHECK(big.value > 1e20);
}

TEST_CASE("critical curve closed forms") {
    ModelParams p;
    p.omega_c = 1.0;
    p.omega_0 = 0.5;
    p.kappa = 1.0;

    p.g = 0.9;
    auto sc = critical_spin(p);
    REQUIRE(sc.has_value());
    CHECK(std::fabs(*sc - 0.625 / 1.62) < 1e-15);
    CHECK(*sc == doctest::Approx(0.385802469).epsilon(1e-9));

    CHECK(critical_coupling(p, 1.0) == doctest::Approx(std::sqrt(0.3125)).epsilon(1e-15));
    CHECK(critical_coupling(p, 0.5) == doctest::Approx(0.790569415).epsilon(1e-9));

    p.g = 0.3;
    CHECK_FALSE(critical_spin(p).has_value());

    p.g = critical_coupling(p, 1.0);
    auto sc1 = critical_spin(p);
    REQUIRE(sc1.has_value());
    CHECK(*sc1 == doctest::Approx(1.0).epsilon(1e-14));

    p.g = 0.0;
    CHECK_THROWS_AS((void)critical_spin(p), Error);
    CHECK_THROWS_AS((void)critical_coupling(p, 0.0), Error);
    CHECK_THROWS_AS((void)critical_coupling(p, -0.2), Error);
}

TEST_CASE("critical curve round trip") {
    ModelParams p;
    p.omega_c = 1.3;
    p.omega_0 = 0.7;
    p.kappa = 0.8;
    for (double st = 0.05; st <= 1.0; st += 0.05) {
        p.g = critical_coupling(p, st);
        auto back = critical_spin(p);
        REQUIRE(back.has_value());
        CHECK(*back == doctest::Approx(st).epsilon(1e-14));
    }
}

TEST_CASE("perturbation split is derived") {
    PerturbationSpec pert{0.01, 0.25};
    CHECK(pert.gamma_phi() == doctest::Approx(0.0025));
    CHECK(pert.gamma_down() == doctest::Approx(0.0075));
    CHECK(pert.gamma_tilde() == doctest::Approx(0.005));
    CHECK_THROWS_AS(PerturbationSpec(0.1, 1.5).validate(), Error);
    CHECK_THROWS_AS(PerturbationSpec(-0.1, 0.5).validate(), Error);
}

TEST_CASE("subspace invariants") {
    CHECK_THROWS_AS(SpinSubspace(3, 4), Error);   // parity mismatch
    CHECK_THROWS_AS(SpinSubspace(6, 4), Error);   // above N
    CHECK(SpinSubspace(4, 4).dimension() == 5);
    CHECK(SpinSubspace(1, 5).s_tilde() == doctest::Approx(0.2));
}
