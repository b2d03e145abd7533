#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "snumlab/errors.hpp"

namespace snumlab {

using cplx = std::complex<double>;

// Dense square complex matrix, row major. Everything in the model algebra is
// a list of these, so the type stays deliberately small: construction,
// arithmetic, adjoint and a few norms.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) { assert(n >= 0); }

    static Matrix identity(int n) {
        Matrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix zero(int n) { return Matrix(n); }

    static Matrix diagonal(const std::vector<double>& d) {
        Matrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<size_t>(i)];
        return m;
    }

    // Row-major initializer, e.g. Matrix::from_rows({{0,2},{0,0}}).
    static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
        Matrix m(static_cast<int>(rows.size()));
        int i = 0;
        for (const auto& row : rows) {
            assert(static_cast<int>(row.size()) == m.dim());
            int j = 0;
            for (cplx v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    int dim() const { return n_; }

    cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    cplx operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    Matrix adjoint() const {
        Matrix r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        assert(n_ == o.n_);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        assert(n_ == o.n_);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    Matrix& operator*=(cplx c) {
        for (auto& v : a_) v *= c;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx c) { return a *= c; }
    friend Matrix operator*(cplx c, Matrix a) { return a *= c; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        assert(a.n_ == b.n_);
        const int n = a.n_;
        Matrix r(n);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0)) continue;
                for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
            }
        }
        return r;
    }

private:
    int n_ = 0;
    std::vector<cplx> a_;
};

inline double frobenius(const Matrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

inline double max_abs(const Matrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) s = std::max(s, std::abs(m(i, j)));
    return s;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    assert(a.dim() == b.dim());
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s = std::max(s, std::abs(a(i, j) - b(i, j)));
    return s;
}

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
    for (int i = 0; i < m.dim(); ++i)
        for (int j = i; j < m.dim(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol * (1.0 + max_abs(m))) return false;
    return true;
}

// Matrix-vector product, used by oracle code and witness extraction.
inline std::vector<cplx> apply(const Matrix& m, const std::vector<cplx>& v) {
    assert(static_cast<int>(v.size()) == m.dim());
    std::vector<cplx> r(v.size(), cplx(0.0));
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r[static_cast<size_t>(i)] += m(i, j) * v[static_cast<size_t>(j)];
    return r;
}

}  // namespace snumlab
