#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dicke/csr.hpp"
#include "dicke/kernels.hpp"

using namespace dicke;

namespace {

std::vector<cdouble> random_vec(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cdouble> v(n);
    for (auto& x : v) x = cdouble(g(rng), g(rng));
    return v;
}

CsrMatrix random_sparse(int rows, int cols, double fill, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    Triplets t(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (u(rng) < fill) t.add(r, c, cdouble(g(rng), g(rng)));
    return t.build();
}

} // namespace

TEST_CASE("serial and parallel kernels agree") {
    const std::size_t n = 100000;  // above the parallel cutoff
    auto x = random_vec(n, 1);
    auto y1 = random_vec(n, 2);
    auto y2 = y1;

    kernels::axpy({0.3, -0.2}, x.data(), y1.data(), n, Exec::Serial);
    kernels::axpy({0.3, -0.2}, x.data(), y2.data(), n, Exec::Parallel);
    for (std::size_t i = 0; i < n; i += 7919) CHECK(std::abs(y1[i] - y2[i]) < 1e-14);

    CHECK(std::abs(kernels::dot(x.data(), y1.data(), n, Exec::Serial) -
                   kernels::dot(x.data(), y2.data(), n, Exec::Parallel)) < 1e-8);
    CHECK(kernels::nrm2(x.data(), n, Exec::Serial) ==
          doctest::Approx(kernels::nrm2(x.data(), n, Exec::Parallel)).epsilon(1e-13));
}

TEST_CASE("csr matvec against dense reference") {
    CsrMatrix a = random_sparse(60, 60, 0.15, 5);
    auto x = random_vec(60, 6);
    std::vector<cdouble> y(60), yref(60, cdouble(0, 0));
    a.apply(x.data(), y.data(), Exec::Serial);
    for (int r = 0; r < 60; ++r)
        for (std::int64_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            yref[r] += a.val[k] * x[a.col[k]];
    for (int r = 0; r < 60; ++r) CHECK(std::abs(y[r] - yref[r]) < 1e-13);
}

TEST_CASE("triplets sum duplicates and drop zeros") {
    Triplets t(3, 3);
    t.add(1, 1, {2.0, 0.0});
    t.add(1, 1, {-2.0, 0.0});
    t.add(0, 2, {1.0, 1.0});
    t.add(0, 2, {1.0, -1.0});
    CsrMatrix m = t.build();
    CHECK(m.nnz() == 1);
    CHECK(m.val[0] == cdouble(2.0, 0.0));
}

TEST_CASE("sparse algebra identities") {
    CsrMatrix a = random_sparse(24, 24, 0.2, 11);
    CsrMatrix b = random_sparse(24, 24, 0.2, 12);
    CsrMatrix id = CsrMatrix::identity(24);

    // (A B)^dag = B^dag A^dag
    CsrMatrix lhs = dagger(multiply(a, b));
    CsrMatrix rhs = multiply(dagger(b), dagger(a));
    auto x = random_vec(24, 13);
    std::vector<cdouble> y1(24), y2(24);
    lhs.apply(x.data(), y1.data());
    rhs.apply(x.data(), y2.data());
    for (int i = 0; i < 24; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-12);

    // A * I = A
    CsrMatrix ai = multiply(a, id);
    ai.apply(x.data(), y1.data());
    a.apply(x.data(), y2.data());
    for (int i = 0; i < 24; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);
}

TEST_CASE("superoperator factor identities") {
    const int d = 8;
    CsrMatrix a = random_sparse(d, d, 0.4, 21);
    CsrMatrix b = random_sparse(d, d, 0.4, 22);
    auto rho = random_vec(static_cast<std::size_t>(d) * d, 23);

    // left/right factors commute: A rho B evaluated both ways
    CsrMatrix lr = multiply(superop_left(a), superop_right(b));
    CsrMatrix rl = multiply(superop_right(b), superop_left(a));
    std::vector<cdouble> y1(rho.size()), y2(rho.size());
    lr.apply(rho.data(), y1.data());
    rl.apply(rho.data(), y2.data());
    for (std::size_t i = 0; i < rho.size(); ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-12);

    // sandwich equals left(L) right(L^dag)
    CsrMatrix sw = superop_sandwich(a);
    CsrMatrix lrd = multiply(superop_left(a), superop_right(dagger(a)));
    sw.apply(rho.data(), y1.data());
    lrd.apply(rho.data(), y2.data());
    for (std::size_t i = 0; i < rho.size(); ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-12);
}

TEST_CASE("lindblad generator preserves trace") {
    const int d = 10;
    CsrMatrix h_half = random_sparse(d, d, 0.3, 31);
    CsrMatrix h = add(h_half, dagger(h_half));  // hermitian
    CsrMatrix jump = random_sparse(d, d, 0.3, 32);
    CsrMatrix lv = lindblad_superop(h, {{0.7, jump}});

    // tr(L rho) = 0 for any rho: the identity left-vector annihilates L
    auto rho = random_vec(static_cast<std::size_t>(d) * d, 33);
    std::vector<cdouble> y(rho.size());
    lv.apply(rho.data(), y.data());
    cdouble tr(0, 0);
    for (int i = 0; i < d; ++i) tr += y[i + d * i];
    CHECK(std::abs(tr) < 1e-11);
}
