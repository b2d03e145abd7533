#include <doctest.h>

#include <cmath>

#include "snumlab/hermitian_eig.hpp"
#include "snumlab/matrix.hpp"
#include "snumlab/random.hpp"

using namespace snumlab;

namespace {

Matrix conjugate_diag(const std::vector<double>& lam, const Matrix& u) {
    return u * Matrix::diagonal(lam) * u.adjoint();
}

}  // namespace

TEST_CASE("matrix arithmetic basics") {
    const Matrix a = Matrix::from_rows({{1.0, cplx(0.0, 2.0)}, {3.0, 4.0}});
    const Matrix b = a.adjoint();
    CHECK(b(0, 1) == cplx(3.0, 0.0));
    CHECK(b(1, 0) == cplx(0.0, -2.0));
    CHECK((a * Matrix::identity(2))(1, 0) == cplx(3.0, 0.0));
    CHECK(frobenius(Matrix::identity(3)) == doctest::Approx(std::sqrt(3.0)));
    CHECK(max_abs_diff(a, a) == 0.0);
}

TEST_CASE("jacobi on a known 2x2 symmetric matrix") {
    const Matrix m = Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
    const HermitianEig e = hermitian_eig(m);
    CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(max_abs_diff(assemble(e, e.values), m) < 1e-12);
}

TEST_CASE("jacobi on a known complex hermitian matrix") {
    // [[1, i], [-i, 1]] has eigenvalues 2 and 0.
    const Matrix m = Matrix::from_rows({{1.0, cplx(0.0, 1.0)}, {cplx(0.0, -1.0), 1.0}});
    const HermitianEig e = hermitian_eig(m);
    CHECK(e.values[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(e.values[1] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(max_abs_diff(assemble(e, e.values), m) < 1e-12);
}

TEST_CASE("jacobi is exact on diagonal input") {
    const Matrix m = Matrix::diagonal({3.0, 2.0, 1.0});
    const HermitianEig e = hermitian_eig(m);
    CHECK(e.values == std::vector<double>{3.0, 2.0, 1.0});
    CHECK(max_abs_diff(e.vectors, Matrix::identity(3)) == 0.0);
}

TEST_CASE("jacobi recovers planted spectra under haar conjugation") {
    CounterRng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + rng.uniform_int(9);
        std::vector<double> lam(static_cast<size_t>(n));
        for (auto& l : lam) l = rng.uniform(-5.0, 5.0);
        std::sort(lam.rbegin(), lam.rend());
        const Matrix u = haar_unitary(n, rng);
        const Matrix m = conjugate_diag(lam, u);

        const HermitianEig e = hermitian_eig(m);
        for (int i = 0; i < n; ++i)
            CHECK(e.values[static_cast<size_t>(i)] ==
                  doctest::Approx(lam[static_cast<size_t>(i)]).epsilon(1e-10));
        CHECK(max_abs_diff(assemble(e, e.values), m) < 1e-11 * (1.0 + max_abs(m)));
        // The eigenvector matrix is unitary.
        CHECK(max_abs_diff(e.vectors * e.vectors.adjoint(), Matrix::identity(n)) < 1e-12);
    }
}

TEST_CASE("jacobi handles clustered eigenvalues") {
    CounterRng rng(7);
    const Matrix u = haar_unitary(4, rng);
    const std::vector<double> lam{1.0, 1.0, 1.0 - 1e-14, 0.5};
    const Matrix m = conjugate_diag(lam, u);
    const HermitianEig e = hermitian_eig(m);
    CHECK(max_abs_diff(assemble(e, e.values), m) < 1e-12);
}
