#pragma once

#include <cstdint>
#include <vector>

#include "dicke/kernels.hpp"

namespace dicke {

// Compressed sparse row complex matrix. Rows/cols fit in int (largest
// operator here is a vectorized Liouvillian of a few 1e5 rows).
struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> row_ptr;  // size rows+1
    std::vector<int> col;
    std::vector<cdouble> val;

    std::int64_t nnz() const { return static_cast<std::int64_t>(val.size()); }

    // y = A x
    void apply(const cdouble* x, cdouble* y, Exec e = Exec::Auto) const;
    // y += alpha * A x
    void apply_add(cdouble alpha, const cdouble* x, cdouble* y, Exec e = Exec::Auto) const;

    double norm_inf() const;  // max absolute row sum

    static CsrMatrix identity(int n);
};

// Order-insensitive builder; duplicate entries are summed on build().
class Triplets {
public:
    Triplets(int rows, int cols) : rows_(rows), cols_(cols) {}

    void add(int r, int c, cdouble v) {
        if (v != cdouble(0.0, 0.0)) entries_.push_back({r, c, v});
    }
    void reserve(std::size_t n) { entries_.reserve(n); }

    CsrMatrix build() const;

private:
    struct Entry {
        int r, c;
        cdouble v;
    };
    int rows_, cols_;
    std::vector<Entry> entries_;
};

// Sparse algebra used when assembling Hamiltonians and dissipators.
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b);
CsrMatrix scale(cdouble alpha, const CsrMatrix& a);
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);
CsrMatrix dagger(const CsrMatrix& a);
CsrMatrix kron(const CsrMatrix& a, const CsrMatrix& b);

// Superoperators on column-stacked density matrices, vec(rho)[i + d*j] =
// rho(i,j) (the convention every Liouvillian in this codebase uses).
CsrMatrix superop_left(const CsrMatrix& a);                       // rho -> A rho
CsrMatrix superop_right(const CsrMatrix& b);                      // rho -> rho B
CsrMatrix superop_sandwich(const CsrMatrix& l);                   // rho -> L rho L^dag

struct JumpOperator {
    double rate = 0.0;
    CsrMatrix op;
};

// Full Lindblad generator:
//   L[rho] = -i(H rho - rho H) + sum_k rate_k (L rho L^dag - {L^dag L, rho}/2).
CsrMatrix lindblad_superop(const CsrMatrix& h, const std::vector<JumpOperator>& jumps);

} // namespace dicke
