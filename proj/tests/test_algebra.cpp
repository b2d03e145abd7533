#include <doctest.h>

#include <cmath>

#include "snumlab/algebra.hpp"
#include "snumlab/random.hpp"
#include "snumlab/svalues.hpp"

using namespace snumlab;

TEST_CASE("trace of pinned fixtures") {
    // Identity on one 2-dimensional block of weight 3.
    const BlockOperator id = BlockOperator::identity(single_block_shape(2, 3.0));
    CHECK(trace(id) == cplx(6.0, 0.0));
    CHECK(trace_positive(id) == 6.0);

    const BlockOperator zero = BlockOperator::zero(single_block_shape(3, 2.0));
    CHECK(trace(zero) == cplx(0.0, 0.0));

    CHECK(trace(diag_op({3.0, 2.0, 1.0})).real() == doctest::Approx(6.0));
}

TEST_CASE("trace refuses non trace class operators") {
    const AlgebraShape shape{{BlockSpec{1, 1.0, false}, BlockSpec{1, kInf, true}}};
    const BlockOperator x(shape, {Matrix::diagonal({2.0}), Matrix::diagonal({1.0})});
    CHECK_THROWS_AS(trace(x), InfiniteTraceError);
    CHECK(trace_positive(x) == kInf);
    // The infinite-weight zero block contributes inf * 0 = 0.
    const BlockOperator y(shape, {Matrix::diagonal({2.0}), Matrix::diagonal({0.0})});
    CHECK(trace(y) == cplx(2.0, 0.0));
}

TEST_CASE("trace is faithful on positives") {
    CounterRng rng(11);
    for (int i = 0; i < 1000; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const BlockOperator x = random_positive(random_shape(c, 6), c);
        if (max_abs(x) > 1e-12) CHECK(trace_positive(x) > 0.0);
    }
}

TEST_CASE("trace property trace(xy) = trace(yx)") {
    CounterRng rng(12);
    for (int i = 0; i < 200; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const AlgebraShape shape = random_shape(c, 8, true);
        const BlockOperator x = random_operator(shape, c);
        const BlockOperator y = random_operator(shape, c);
        const cplx lhs = trace(x * y), rhs = trace(y * x);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("abs fixtures") {
    CHECK(approx_equal(abs(cplx(-1.0) * BlockOperator::identity(single_block_shape(2))),
                       BlockOperator::identity(single_block_shape(2))));

    const BlockOperator x(single_block_shape(2), {Matrix::from_rows({{0.0, 2.0}, {0.0, 0.0}})});
    CHECK(approx_equal(abs(x), diag_op({0.0, 2.0})));

    CounterRng rng(3);
    const Matrix u = haar_unitary(3, rng);
    const BlockOperator unitary(single_block_shape(3), {u});
    CHECK(approx_equal(abs(unitary), BlockOperator::identity(single_block_shape(3))));
}

TEST_CASE("abs squares back to x*x") {
    CounterRng rng(4);
    for (int i = 0; i < 100; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const BlockOperator x = random_operator(random_shape(c, 6), c);
        const BlockOperator m = abs(x);
        CHECK(max_abs_diff(m * m, adjoint(x) * x) < 1e-10 * (1.0 + max_abs(x) * max_abs(x)));
    }
}

TEST_CASE("power fixtures and inverse pair") {
    CHECK(approx_equal(power(diag_op({4.0, 9.0}), 0.5), diag_op({2.0, 3.0})));
    CHECK(approx_equal(power(BlockOperator::identity(single_block_shape(3)), 3.14),
                       BlockOperator::identity(single_block_shape(3))));

    // power(power(x, r), 1/r) = x and power(x, 3) = x x x.
    CounterRng rng(5);
    for (int i = 0; i < 50; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const BlockOperator x = random_positive(random_shape(c, 6), c);
        CHECK(approx_equal(power(power(x, 1.7), 1.0 / 1.7), x, 1e-9));
        CHECK(max_abs_diff(power(x, 3.0), x * x * x) < 1e-10 * (1.0 + std::pow(max_abs(x), 3.0)));
    }

    CHECK_THROWS_AS(power(diag_op({-1.0, 1.0}), 0.5), NotPositiveError);
    CHECK_THROWS_AS(power(diag_op({0.0, 1.0}), -1.0), SingularOperandError);

    // Roundoff-scale negatives clamp to zero rather than erroring.
    CHECK(approx_equal(power(diag_op({-1e-11, 4.0}), 0.5), diag_op({0.0, 2.0})));
}

TEST_CASE("spectral projection fixtures") {
    CHECK(approx_equal(spectral_projection(diag_op({3.0, 1.0}), Interval::above(2.0)).op(),
                       diag_op({1.0, 0.0})));
    CHECK(approx_equal(
        spectral_projection(diag_op({3.0, 1.0}), Interval{0.0, kInf, false, true}).op(),
        BlockOperator::identity(single_block_shape(2))));
    CHECK(approx_equal(
        spectral_projection(diag_op({3.0, 2.0, 1.0}), Interval::left_open(1.5, 2.5)).op(),
        diag_op({0.0, 1.0, 0.0})));
}

TEST_CASE("spectral projections decrease in the threshold") {
    CounterRng rng(6);
    for (int i = 0; i < 50; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const BlockOperator x = random_positive(random_shape(c, 6), c);
        const double top = uniform_norm(x);
        Projection prev = spectral_projection(x, Interval::above(0.0));
        for (double t : {0.2, 0.5, 0.8}) {
            const Projection cur = spectral_projection(x, Interval::above(t * top));
            // Range inclusion: P_prev P_cur = P_cur.
            CHECK(max_abs_diff(prev.op() * cur.op(), cur.op()) < 1e-9);
            prev = cur;
        }
    }
}

TEST_CASE("projection type validates and traces") {
    CHECK_THROWS_AS(Projection(diag_op({0.5, 0.0})), DomainError);
    const Projection p(diag_op({1.0, 0.0, 1.0}, 2.0));
    CHECK(p.trace() == 4.0);

    const AlgebraShape shape{{BlockSpec{1, kInf, true}}};
    const Projection q(BlockOperator::identity(shape));
    CHECK(is_inf(q.trace()));
}

TEST_CASE("polar fixtures") {
    // Positive operand: the isometry is its support projection.
    const BlockOperator pos = diag_op({2.0, 0.0});
    const PolarData pd = polar(pos);
    CHECK(approx_equal(pd.partial_isometry, diag_op({1.0, 0.0})));

    const BlockOperator x(single_block_shape(2), {Matrix::from_rows({{0.0, 2.0}, {0.0, 0.0}})});
    const PolarData px = polar(x);
    CHECK(approx_equal(px.modulus, diag_op({0.0, 2.0})));
    CHECK(approx_equal(px.partial_isometry,
                       BlockOperator(single_block_shape(2),
                                     {Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})})));

    CounterRng rng(8);
    const Matrix u = haar_unitary(3, rng);
    const BlockOperator unitary(single_block_shape(3), {u});
    const PolarData pu = polar(unitary);
    CHECK(approx_equal(pu.partial_isometry, unitary));
    CHECK(approx_equal(pu.modulus, BlockOperator::identity(single_block_shape(3))));
}

TEST_CASE("complex entries: nilpotent shift with phase") {
    // x = [[0, 2i], [0, 0]]: |x| = diag(0, 2), nu = [[0, i], [0, 0]].
    const BlockOperator x(single_block_shape(2),
                          {Matrix::from_rows({{0.0, cplx(0.0, 2.0)}, {0.0, 0.0}})});
    CHECK(approx_equal(abs(x), diag_op({0.0, 2.0})));
    const PolarData pd = polar(x);
    CHECK(max_abs_diff(pd.partial_isometry * pd.modulus, x) < 1e-12);
    CHECK(std::abs(pd.partial_isometry.block(0)(0, 1) - cplx(0.0, 1.0)) < 1e-12);
    CHECK(mu(x).segments() == std::vector<Segment>{{2.0, 1.0}, {0.0, kInf}});
    CHECK(trace(x) == cplx(0.0, 0.0));
    CHECK(trace(x * adjoint(x)) == cplx(4.0, 0.0));
}

TEST_CASE("polar reconstructs and matches abs") {
    CounterRng rng(9);
    for (int i = 0; i < 100; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const BlockOperator x = random_operator(random_shape(c, 6), c);
        const PolarData pd = polar(x);
        CHECK(max_abs_diff(pd.partial_isometry * pd.modulus, x) < 1e-9 * (1.0 + max_abs(x)));
        CHECK(max_abs_diff(pd.modulus, abs(x)) < 1e-9 * (1.0 + max_abs(x)));
        // nu^* nu is the support projection of |x|.
        CHECK(max_abs_diff(adjoint(pd.partial_isometry) * pd.partial_isometry,
                           support_projection(x).op()) < 1e-8);
        CHECK(uniform_norm(pd.partial_isometry) <= 1.0 + 1e-10);
    }
}

TEST_CASE("c-star identity for the uniform norm") {
    CounterRng rng(10);
    for (int i = 0; i < 100; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const BlockOperator x = random_operator(random_shape(c, 6), c);
        const double n = uniform_norm(x);
        CHECK(uniform_norm(adjoint(x) * x) == doctest::Approx(n * n).epsilon(1e-10));
    }
}

TEST_CASE("shape mismatch is refused") {
    const BlockOperator a = diag_op({1.0, 2.0});
    const BlockOperator b = diag_op({1.0, 2.0}, 2.0);
    CHECK_THROWS_AS(a * b, ShapeMismatchError);
    CHECK_THROWS_AS(a + b, ShapeMismatchError);
}
