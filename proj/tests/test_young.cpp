#include <doctest.h>

#include <cmath>

#include "snumlab/flags.hpp"
#include "snumlab/random.hpp"
#include "snumlab/young.hpp"

using namespace snumlab;

TEST_CASE("young gap on pinned fixtures") {
    // Equal projections saturate the inequality outright.
    const BlockOperator proj = diag_op({1.0, 0.0});
    const GapReport same = young_gap(proj, proj, 2.0);
    CHECK(same.equality);
    CHECK(!same.violation);

    // diag(2,1) against diag(1,2) at p = q = 2: mu(ab) = 2, mu(D) = 2.5 on [0,2).
    const GapReport off = young_gap(diag_op({2.0, 1.0}), diag_op({1.0, 2.0}), 2.0);
    CHECK(!off.equality);
    CHECK(off.gap[0] == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(off.max_abs_gap == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(off.min_gap >= -1e-10);  // the zero tail pins the minimum at 0
    CHECK(off.mu_ab[0] == doctest::Approx(2.0));
    CHECK(off.mu_d[0] == doctest::Approx(2.5));

    // The p = 3 witness diag(8,1) -> diag(64,1).
    const GapReport witness = young_gap(diag_op({8.0, 1.0}), diag_op({64.0, 1.0}), 3.0);
    CHECK(witness.equality);
    CHECK(witness.exchanged);  // canonicalised to p <= 2
    CHECK(witness.p == doctest::Approx(1.5));

    CHECK_THROWS_AS(young_gap(proj, proj, 1.0), DomainError);
}

TEST_CASE("equality witness fixtures") {
    CHECK(approx_equal(equality_witness(diag_op({8.0, 1.0}), 3.0), diag_op({64.0, 1.0}), 1e-10));
    const BlockOperator id = BlockOperator::identity(single_block_shape(2));
    CHECK(approx_equal(equality_witness(id, 1.5), id));
    CHECK(max_abs(equality_witness(BlockOperator::zero(single_block_shape(2)), 2.5)) == 0.0);
}

TEST_CASE("equality witnesses close the gap for every p") {
    CounterRng rng(51);
    for (double p : {1.25, 1.5, 2.0, 3.0, 4.0}) {
        for (int i = 0; i < 40; ++i) {
            CounterRng c = rng.fork(static_cast<uint64_t>(i) * 31 + static_cast<uint64_t>(p * 4));
            const BlockOperator a = random_positive(random_shape(c, 8, true), c);
            const BlockOperator b = equality_witness(a, p);
            const GapReport rep = young_gap(a, b, p);
            CHECK(rep.equality);
            CHECK(!rep.violation);
        }
    }
}

TEST_CASE("equality detection on witness, off-equality and perturbed pairs") {
    const BlockOperator a = diag_op({8.0, 1.0});
    const BlockOperator b = diag_op({64.0, 1.0});

    const EqualityVerdict v = equality_detect(a, b, 3.0);
    CHECK(v.equality_of_mu);
    CHECK(v.power_identity_residual <= 1e-8);
    CHECK(v.theorem_consistent);
    CHECK(v.range_coincidence);

    // Orthogonal supports are reported as non-coincident.
    CHECK(!equality_detect(diag_op({1.0, 0.0}), diag_op({0.0, 1.0}), 3.0).range_coincidence);

    const EqualityVerdict off = equality_detect(diag_op({2.0, 1.0}), diag_op({1.0, 2.0}), 2.0);
    CHECK(!off.equality_of_mu);
    CHECK(off.min_gap >= -1e-10);
    CHECK(off.theorem_consistent);
    CHECK(off.relaxed_p2_hypothesis);

    const EqualityVerdict perturbed =
        equality_detect(a, diag_op({64.0, 1.0 + 1e-3}), 3.0);
    CHECK(!perturbed.equality_of_mu);
    CHECK(perturbed.power_identity_residual > 0.0);
    CHECK(perturbed.theorem_consistent);
}

TEST_CASE("equality detection refuses non tau-compact operands") {
    const AlgebraShape shape{{BlockSpec{1, kInf, true}}};
    const BlockOperator x(shape, {Matrix::diagonal({1.0})});
    CHECK_THROWS_AS(equality_detect(x, x, 2.0), NonCompactError);
}

TEST_CASE("range coincidence under mu equality") {
    const BlockOperator a = diag_op({8.0, 1.0});
    const PropertyReport ok = range_coincidence_check(a, diag_op({64.0, 1.0}), 3.0);
    CHECK(ok.all_pass());
    CHECK(ok.find("supports_equal")->applicable);

    // ab = 0: the hypothesis fails and the report says not applicable.
    const PropertyReport na = range_coincidence_check(diag_op({1.0, 0.0}), diag_op({0.0, 1.0}), 3.0);
    CHECK(!na.find("mu_equality_hypothesis")->pass);
    CHECK(!na.find("supports_equal")->applicable);

    CHECK_THROWS_AS(range_coincidence_check(a, a, 2.0), DomainError);

    CounterRng rng(52);
    for (int i = 0; i < 50; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const BlockOperator x = random_positive(random_shape(c, 6), c);
        CHECK(range_coincidence_check(x, equality_witness(x, 1.5), 1.5).all_pass());
    }
}

TEST_CASE("trace saturation fixtures") {
    const BlockOperator x = diag_op({3.0, 2.0, 1.0});

    const SaturationReport top = trace_saturation_commutes(x, Projection(diag_op({1.0, 0.0, 0.0})));
    CHECK(top.trace_px == doctest::Approx(3.0));
    CHECK(top.saturated);
    CHECK(top.commutes);

    // Projection onto (e1 + e2)/sqrt(2): the partial trace undershoots.
    Matrix m(3);
    m(0, 0) = m(0, 1) = m(1, 0) = m(1, 1) = 0.5;
    const SaturationReport mixed =
        trace_saturation_commutes(x, Projection(BlockOperator(single_block_shape(3), {m})));
    CHECK(mixed.trace_px == doctest::Approx(2.5));
    CHECK(!mixed.saturated);
    CHECK(mixed.implication_holds);

    const SaturationReport full =
        trace_saturation_commutes(x, Projection(BlockOperator::identity(single_block_shape(3))));
    CHECK(full.saturated);
    CHECK(full.commutes);
}

TEST_CASE("saturation implies commutation across a random sweep") {
    CounterRng rng(53);
    for (int i = 0; i < 500; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const AlgebraShape shape = random_shape(c, 6);
        const BlockOperator x = random_positive(shape, c);
        const Projection p = random_projection_with_trace_at_most(shape, c.uniform(0.5, 4.0), c);
        CHECK(trace_saturation_commutes(x, p).implication_holds);
    }
}

TEST_CASE("douglas factorisation fixtures") {
    const AlgebraShape shape = single_block_shape(3);
    CounterRng rng(54);
    const BlockOperator y = random_operator(shape, rng);

    // x = y: the factor is the support projection of y^*.
    const BlockOperator c_same = douglas_factor(y, y, 1.0);
    CHECK(approx_equal(c_same, support_projection(y).op(), 1e-8));

    // x a projection under the identity: the factor is x itself.
    const BlockOperator p = diag_op({1.0, 0.0, 1.0});
    CHECK(approx_equal(douglas_factor(p, BlockOperator::identity(shape), 1.0), p, 1e-10));

    // Violated domination carries a witness direction.
    try {
        douglas_factor(cplx(2.0) * BlockOperator::identity(shape), p, 1.0);
        CHECK(false);
    } catch (const MajorizationError& e) {
        CHECK(e.eigenvalue < 0.0);
        CHECK(e.witness.size() == 3);
    }
}

TEST_CASE("douglas respects the sqrt-lambda norm bound") {
    CounterRng rng(59);
    const AlgebraShape shape = single_block_shape(4);
    const BlockOperator y = random_operator(shape, rng);
    const BlockOperator x = cplx(2.0) * y;
    // x x* = 4 y y*, so lambda = 4 admits the factor c = 2 * support(y*).
    const BlockOperator c = douglas_factor(x, y, 4.0);
    CHECK(uniform_norm(c) <= 2.0 + 1e-8);
    CHECK(max_abs_diff(y * c, x) <= 1e-8 * (1.0 + max_abs(x)));
    CHECK_THROWS_AS(douglas_factor(x, y, 3.9), MajorizationError);
}

TEST_CASE("douglas recovers planted contractions") {
    CounterRng rng(55);
    for (int i = 0; i < 300; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const AlgebraShape shape = random_shape(c, 8);
        const BlockOperator y = random_operator(shape, c);
        const BlockOperator c0 = random_contraction(shape, c);
        const BlockOperator x = y * c0;
        const BlockOperator rec = douglas_factor(x, y, 1.0);
        CHECK(max_abs_diff(y * rec, x) <= 1e-8 * (1.0 + max_abs(x)));
        CHECK(uniform_norm(rec) <= 1.0 + 1e-8);
    }
}

TEST_CASE("local integrability split fixtures") {
    // Bounded operator on a finite shape: both parts are finite and sum back.
    const BlockOperator a = diag_op({4.0, 2.0, 1.0});
    const auto [summable, bounded] = lp_loc_split(a, 2.0, 1.0);
    CHECK(approx_equal(summable + bounded, a));
    CHECK(approx_equal(summable, diag_op({4.0, 0.0, 0.0})));
    CHECK(uniform_norm(bounded) <= mu_at(a, 1.0));
    // On exact diagonal data the truncation identity holds segment for segment.
    CHECK(mu(summable).segments() == mu(a).truncated(1.0).segments());

    // Level 5 of width one next to an infinite diffuse level 0.5.
    const AlgebraShape shape{{BlockSpec{1, 1.0, false}, BlockSpec{1, kInf, true}}};
    const BlockOperator mixed(shape, {Matrix::diagonal({5.0}), Matrix::diagonal({0.5})});
    const auto [top, tail] = lp_loc_split(mixed, 1.0, 1.0);
    CHECK(mu_at(mixed, 1.0) == 0.5);
    CHECK(trace_positive(abs(top)) == 5.0);
    CHECK(uniform_norm(tail) == doctest::Approx(0.5));

    const auto [z1, z2] = lp_loc_split(BlockOperator::zero(single_block_shape(2)), 1.5, 2.0);
    CHECK(max_abs(z1) == 0.0);
    CHECK(max_abs(z2) == 0.0);
}

TEST_CASE("local integrability split truncates mu at strict drops") {
    CounterRng rng(56);
    for (int i = 0; i < 100; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const BlockOperator a = random_positive(random_shape(c, 6, true), c);
        const SingularValueFunction f = mu(a);
        // Pick a breakpoint where mu strictly drops; there the summable part
        // carries exactly mu restricted to (0, t).
        for (double t : f.breakpoints()) {
            if (!(t > 0.0)) continue;
            const double before = f.value_at(t * (1.0 - 1e-12));
            const double after = f.value_at(t);
            if (before - after < 1e-6) continue;
            const auto [summable, bounded] = lp_loc_split(a, 2.0, t);
            CHECK(approx_equal(summable + bounded, a, 1e-10));
            CHECK(approx_equal(mu(summable), f.truncated(t), 1e-9));
            CHECK(uniform_norm(bounded) <= after + 1e-9);
        }
    }
}

TEST_CASE("hoelder equality oracle") {
    // a = b at p = q = 2 always saturates and asserts trivially.
    const BlockOperator a = diag_op({2.0, 1.0});
    const HoelderReport same = hoelder_equality_oracle(a, a, 2.0);
    CHECK(same.hoelder_saturated);
    CHECK(same.young_saturated);
    CHECK(same.applicable);
    CHECK(same.pass);

    // The p = 3 witness saturates both bounds.
    const HoelderReport wit = hoelder_equality_oracle(diag_op({8.0, 1.0}), diag_op({64.0, 1.0}), 3.0);
    CHECK(wit.applicable);
    CHECK(wit.pass);

    // diag(2,1) against diag(1,2): |ab|_1 = 4 < |a|_2 |b|_2 = 5, vacuous.
    const HoelderReport vac = hoelder_equality_oracle(diag_op({2.0, 1.0}), diag_op({1.0, 2.0}), 2.0);
    CHECK(vac.norm_ab_1 == doctest::Approx(4.0));
    CHECK(vac.norm_a_p * vac.norm_b_q == doctest::Approx(5.0));
    CHECK(!vac.applicable);
    CHECK(vac.pass);
}

TEST_CASE("hoelder oracle agrees with the witness construction") {
    CounterRng rng(57);
    for (double p : {1.5, 2.0, 3.0}) {
        for (int i = 0; i < 50; ++i) {
            CounterRng c = rng.fork(static_cast<uint64_t>(i) + static_cast<uint64_t>(100 * p));
            const BlockOperator a = random_positive(random_shape(c, 6), c);
            const HoelderReport rep = hoelder_equality_oracle(a, equality_witness(a, p), p);
            CHECK(rep.applicable);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("truncation limit closes monotonically") {
    // Already bounded with one level: immediate convergence.
    const BlockOperator a = diag_op({4.0, 2.0, 1.0});
    const PropertyReport one = truncation_limit_check(a, equality_witness(a, 2.0), 2.0, 1);
    CHECK(one.all_pass());

    const PropertyReport multi = truncation_limit_check(a, equality_witness(a, 2.0), 2.0, 3);
    CHECK(multi.all_pass());

    const BlockOperator zero = BlockOperator::zero(single_block_shape(2));
    CHECK(truncation_limit_check(zero, zero, 2.0, 2).all_pass());

    CounterRng rng(58);
    for (int i = 0; i < 50; ++i) {
        CounterRng c = rng.fork(static_cast<uint64_t>(i));
        const AlgebraShape shape = random_shape(c, 6, true);
        const BlockOperator x = random_operator(shape, c);
        const BlockOperator y = random_operator(shape, c);
        CHECK(truncation_limit_check(x, y, 1.5, 4).all_pass());
    }
}
