#include "dicke/csr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dicke/errors.hpp"

namespace dicke {

void CsrMatrix::apply(const cdouble* x, cdouble* y, Exec e) const {
    if (kernels::resolve(e) == Exec::Parallel && nnz() >= 32768) {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < rows; ++r) {
            cdouble acc(0.0, 0.0);
            for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
            y[r] = acc;
        }
    } else {
        for (int r = 0; r < rows; ++r) {
            cdouble acc(0.0, 0.0);
            for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
            y[r] = acc;
        }
    }
}

void CsrMatrix::apply_add(cdouble alpha, const cdouble* x, cdouble* y, Exec e) const {
    if (kernels::resolve(e) == Exec::Parallel && nnz() >= 32768) {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < rows; ++r) {
            cdouble acc(0.0, 0.0);
            for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
            y[r] += alpha * acc;
        }
    } else {
        for (int r = 0; r < rows; ++r) {
            cdouble acc(0.0, 0.0);
            for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
            y[r] += alpha * acc;
        }
    }
}

double CsrMatrix::norm_inf() const {
    double m = 0.0;
    for (int r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += std::abs(val[k]);
        m = std::max(m, s);
    }
    return m;
}

CsrMatrix CsrMatrix::identity(int n) {
    CsrMatrix m;
    m.rows = m.cols = n;
    m.row_ptr.resize(n + 1);
    m.col.resize(n);
    m.val.assign(n, cdouble(1.0, 0.0));
    for (int i = 0; i <= n; ++i) m.row_ptr[i] = i;
    std::iota(m.col.begin(), m.col.end(), 0);
    return m;
}

CsrMatrix Triplets::build() const {
    std::vector<std::size_t> order(entries_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (entries_[a].r != entries_[b].r) return entries_[a].r < entries_[b].r;
        return entries_[a].c < entries_[b].c;
    });

    CsrMatrix m;
    m.rows = rows_;
    m.cols = cols_;
    m.row_ptr.assign(rows_ + 1, 0);
    m.col.reserve(entries_.size());
    m.val.reserve(entries_.size());
    for (std::size_t idx = 0; idx < order.size();) {
        const Entry& e0 = entries_[order[idx]];
        cdouble sum(0.0, 0.0);
        std::size_t j = idx;
        for (; j < order.size(); ++j) {
            const Entry& e = entries_[order[j]];
            if (e.r != e0.r || e.c != e0.c) break;
            sum += e.v;
        }
        if (sum != cdouble(0.0, 0.0)) {
            m.col.push_back(e0.c);
            m.val.push_back(sum);
            ++m.row_ptr[e0.r + 1];
        }
        idx = j;
    }
    for (int r = 0; r < rows_; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
    return m;
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw Error("internal", "sparse add shape mismatch");
    Triplets t(a.rows, a.cols);
    t.reserve(static_cast<std::size_t>(a.nnz() + b.nnz()));
    for (int r = 0; r < a.rows; ++r)
        for (std::int64_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) t.add(r, a.col[k], a.val[k]);
    for (int r = 0; r < b.rows; ++r)
        for (std::int64_t k = b.row_ptr[r]; k < b.row_ptr[r + 1]; ++k) t.add(r, b.col[k], b.val[k]);
    return t.build();
}

CsrMatrix scale(cdouble alpha, const CsrMatrix& a) {
    CsrMatrix m = a;
    for (auto& v : m.val) v *= alpha;
    return m;
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.cols != b.rows) throw Error("internal", "sparse multiply shape mismatch");
    Triplets t(a.rows, b.cols);
    for (int r = 0; r < a.rows; ++r)
        for (std::int64_t ka = a.row_ptr[r]; ka < a.row_ptr[r + 1]; ++ka) {
            int m = a.col[ka];
            for (std::int64_t kb = b.row_ptr[m]; kb < b.row_ptr[m + 1]; ++kb)
                t.add(r, b.col[kb], a.val[ka] * b.val[kb]);
        }
    return t.build();
}

CsrMatrix dagger(const CsrMatrix& a) {
    Triplets t(a.cols, a.rows);
    t.reserve(static_cast<std::size_t>(a.nnz()));
    for (int r = 0; r < a.rows; ++r)
        for (std::int64_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            t.add(a.col[k], r, std::conj(a.val[k]));
    return t.build();
}

CsrMatrix kron(const CsrMatrix& a, const CsrMatrix& b) {
    Triplets t(a.rows * b.rows, a.cols * b.cols);
    t.reserve(static_cast<std::size_t>(a.nnz() * b.nnz()));
    for (int ra = 0; ra < a.rows; ++ra)
        for (std::int64_t ka = a.row_ptr[ra]; ka < a.row_ptr[ra + 1]; ++ka)
            for (int rb = 0; rb < b.rows; ++rb)
                for (std::int64_t kb = b.row_ptr[rb]; kb < b.row_ptr[rb + 1]; ++kb)
                    t.add(ra * b.rows + rb, a.col[ka] * b.cols + b.col[kb],
                          a.val[ka] * b.val[kb]);
    return t.build();
}

// vec(rho)[i + d*j] = rho(i,j):
//   (A rho)(i,j)       -> entry [(i,j),(i',j)]  = A(i,i')
//   (rho B)(i,j)       -> entry [(i,j),(i,j')]  = B(j',j)
//   (L rho Ld)(i,j)    -> entry [(i,j),(i',j')] = L(i,i') conj(L(j,j'))
CsrMatrix superop_left(const CsrMatrix& a) {
    const int d = a.rows;
    Triplets t(d * d, d * d);
    t.reserve(static_cast<std::size_t>(a.nnz()) * d);
    for (int i = 0; i < d; ++i)
        for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            int ip = a.col[k];
            for (int j = 0; j < d; ++j) t.add(i + d * j, ip + d * j, a.val[k]);
        }
    return t.build();
}

CsrMatrix superop_right(const CsrMatrix& b) {
    const int d = b.rows;
    Triplets t(d * d, d * d);
    t.reserve(static_cast<std::size_t>(b.nnz()) * d);
    for (int jp = 0; jp < d; ++jp)
        for (std::int64_t k = b.row_ptr[jp]; k < b.row_ptr[jp + 1]; ++k) {
            int j = b.col[k];
            for (int i = 0; i < d; ++i) t.add(i + d * j, i + d * jp, b.val[k]);
        }
    return t.build();
}

CsrMatrix superop_sandwich(const CsrMatrix& l) {
    const int d = l.rows;
    Triplets t(d * d, d * d);
    t.reserve(static_cast<std::size_t>(l.nnz() * l.nnz()));
    for (int i = 0; i < d; ++i)
        for (std::int64_t ki = l.row_ptr[i]; ki < l.row_ptr[i + 1]; ++ki)
            for (int j = 0; j < d; ++j)
                for (std::int64_t kj = l.row_ptr[j]; kj < l.row_ptr[j + 1]; ++kj)
                    t.add(i + d * j, l.col[ki] + d * l.col[kj],
                          l.val[ki] * std::conj(l.val[kj]));
    return t.build();
}

CsrMatrix lindblad_superop(const CsrMatrix& h, const std::vector<JumpOperator>& jumps) {
    const cdouble mi(0.0, -1.0);
    CsrMatrix lv = add(scale(mi, superop_left(h)), scale(-mi, superop_right(h)));
    for (const auto& j : jumps) {
        if (j.rate == 0.0) continue;
        CsrMatrix ldl = multiply(dagger(j.op), j.op);
        CsrMatrix diss = add(superop_sandwich(j.op),
                             scale(-0.5, add(superop_left(ldl), superop_right(ldl))));
        lv = add(lv, scale(cdouble(j.rate, 0.0), diss));
    }
    return lv;
}

} // namespace dicke
