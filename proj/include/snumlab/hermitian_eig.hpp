#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "snumlab/errors.hpp"
#include "snumlab/matrix.hpp"

namespace snumlab {

// Eigendecomposition of a Hermitian matrix: a = vectors * diag(values) * vectors^*,
// eigenvalues sorted in non-increasing order, columns of `vectors` matching.
struct HermitianEig {
    std::vector<double> values;
    Matrix vectors;
};

namespace detail {

inline double off_diagonal_frobenius(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

// Cyclic Jacobi for complex Hermitian input. Each rotation diagonalises the
// 2x2 principal submatrix at (p,q) exactly via its closed-form spectral
// decomposition, so no rotation-angle convention can drift. Convergence is
// declared when the off-diagonal Frobenius norm drops below 1e-13 relative to
// the input scale; more than 100 sweeps raises EigSolverError.
inline HermitianEig hermitian_eig(const Matrix& input) {
    const int n = input.dim();
    Matrix a = input;
    Matrix v = Matrix::identity(n);

    const double scale = std::max(1.0, frobenius(a));
    const double threshold = 1e-13 * scale;
    const int max_sweeps = 100;

    int sweep = 0;
    while (detail::off_diagonal_frobenius(a) > threshold) {
        if (++sweep > max_sweeps) throw EigSolverError("jacobi eigensolver did not converge");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx z = a(p, q);
                if (std::abs(z) <= 1e-300) continue;

                const double alpha = a(p, p).real();
                const double beta = a(q, q).real();
                const double half_diff = 0.5 * (alpha - beta);
                const double disc = std::hypot(half_diff, std::abs(z));
                const double lam1 = 0.5 * (alpha + beta) + disc;

                // Eigenvector of [[alpha, z], [conj(z), beta]] for lam1; pick
                // the better conditioned of the two algebraic forms.
                cplx x1, y1;
                if (lam1 - alpha >= lam1 - beta) {
                    x1 = z;
                    y1 = cplx(lam1 - alpha, 0.0);
                } else {
                    x1 = cplx(lam1 - beta, 0.0);
                    y1 = std::conj(z);
                }
                const double nv = std::sqrt(std::norm(x1) + std::norm(y1));
                if (nv <= 1e-300) continue;
                x1 /= nv;
                y1 /= nv;
                // Local unitary u = [[x1, -conj(y1)], [y1, conj(x1)]].

                // Columns p and q of a and of the accumulated basis.
                for (int i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip * x1 + aiq * y1;
                    a(i, q) = -aip * std::conj(y1) + aiq * std::conj(x1);
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip * x1 + viq * y1;
                    v(i, q) = -vip * std::conj(y1) + viq * std::conj(x1);
                }
                // Rows p and q (multiplication by u^* from the left).
                for (int j = 0; j < n; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = std::conj(x1) * apj + std::conj(y1) * aqj;
                    a(q, j) = -y1 * apj + x1 * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);
            }
        }
    }

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

    HermitianEig out;
    out.values.resize(static_cast<size_t>(n));
    out.vectors = Matrix(n);
    for (int c = 0; c < n; ++c) {
        out.values[static_cast<size_t>(c)] = a(order[static_cast<size_t>(c)], order[static_cast<size_t>(c)]).real();
        for (int r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[static_cast<size_t>(c)]);
    }
    return out;
}

// Rebuild f(a) = vectors * diag(f(values)) * vectors^* from a decomposition.
inline Matrix assemble(const HermitianEig& e, const std::vector<double>& mapped) {
    const int n = e.vectors.dim();
    Matrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < n; ++k)
                s += e.vectors(i, k) * mapped[static_cast<size_t>(k)] * std::conj(e.vectors(j, k));
            r(i, j) = s;
        }
    }
    return r;
}

}  // namespace snumlab
