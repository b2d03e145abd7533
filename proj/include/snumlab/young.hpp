#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "snumlab/algebra.hpp"
#include "snumlab/report.hpp"
#include "snumlab/svalues.hpp"

namespace snumlab {

// Any computed gap below this is a hard failure: the operator Young
// inequality mu(ab^*) <= mu(D) has no exceptions, so a violation can only be
// an implementation defect.
inline constexpr double kYoungHardFloor = 1e-10;

// Pointwise audit of mu_s(ab^*) against mu_s(D), D = (1/p)|a|^p + (1/q)|b|^q,
// on the union of breakpoints of both step functions.
struct GapReport {
    double p = 2.0;
    double q = 2.0;
    bool exchanged = false;  // operands swapped to canonicalise p <= 2
    std::vector<double> breakpoints;
    std::vector<double> mu_ab;
    std::vector<double> mu_d;
    std::vector<double> gap;
    double min_gap = 0.0;
    double max_abs_gap = 0.0;
    bool equality = false;   // |gap| <= tol at every breakpoint
    bool violation = false;  // gap < -kYoungHardFloor somewhere
    double tol = 1e-9;
};

// mu(ab^*) is computed through mu(|a| |b|): the two have the same singular
// value function, and the reduction keeps every code path on positive
// operands. Exchanging (a, p) with (b, q) when p > 2 changes neither side.
inline GapReport young_gap(const BlockOperator& a_in, const BlockOperator& b_in, double p,
                           double tol = 1e-9) {
    require_same_shape(a_in, b_in);
    if (!(p > 1.0)) throw DomainError("young_gap requires p > 1");

    GapReport rep;
    rep.tol = tol;
    double q = p / (p - 1.0);
    const BlockOperator* a = &a_in;
    const BlockOperator* b = &b_in;
    rep.exchanged = p > 2.0;
    if (rep.exchanged) {
        std::swap(a, b);
        std::swap(p, q);
    }
    rep.p = p;
    rep.q = q;

    const BlockOperator abs_a = abs(*a);
    const BlockOperator abs_b = abs(*b);
    const SingularValueFunction mu_ab = mu(abs_a * abs_b);
    const BlockOperator d_op = cplx(1.0 / p) * power(abs_a, p) + cplx(1.0 / q) * power(abs_b, q);
    const SingularValueFunction mu_d = mu(d_op);

    rep.breakpoints = breakpoint_union(mu_ab, mu_d);
    rep.min_gap = kInf;
    for (double s : rep.breakpoints) {
        const double at = s > 0.0 ? s : 1e-300;
        const double va = mu_ab.value_at(at);
        const double vd = mu_d.value_at(at);
        rep.mu_ab.push_back(va);
        rep.mu_d.push_back(vd);
        rep.gap.push_back(vd - va);
        rep.min_gap = std::min(rep.min_gap, vd - va);
        rep.max_abs_gap = std::max(rep.max_abs_gap, std::abs(vd - va));
    }
    rep.equality = rep.max_abs_gap <= tol;
    rep.violation = rep.min_gap < -kYoungHardFloor;
    return rep;
}

// The canonical equality partner: b = |a|^{p/q} gives |a|^p = |b|^q at
// eigenvalue level, hence a zero gap curve.
inline BlockOperator equality_witness(const BlockOperator& a, double p) {
    if (!(p > 1.0)) throw DomainError("equality_witness requires p > 1");
    const double q = p / (p - 1.0);
    return power(abs(a), p / q);
}

// Outcome of the equality test mu(ab^*) = mu(D)  =>  |a|^p = |b|^q.
struct EqualityVerdict {
    bool equality_of_mu = false;
    double power_identity_residual = 0.0;  // max modulus of |a|^p - |b|^q
    bool range_coincidence = false;
    bool theorem_consistent = false;  // equality_of_mu implies residual <= tol * kappa
    double kappa = 1.0;               // conditioning factor 1 + max(|a|,|b|)^max(p,q)
    double min_gap = 0.0;
    double tol = 1e-9;
    // With p = q = 2 the integrability hypothesis on ab relaxes one class;
    // recorded so reports can state which hypothesis the run exercised.
    bool relaxed_p2_hypothesis = false;
};

inline EqualityVerdict equality_detect(const BlockOperator& a, const BlockOperator& b, double p,
                                       double tol = 1e-9) {
    if (!is_tau_compact(a) || !is_tau_compact(b))
        throw NonCompactError(
            "equality_detect: non tau-compact operand; an operator with an infinite "
            "distribution tail cannot be recovered from its singular value data");

    const GapReport gap = young_gap(a, b, p, tol);
    const double q = p / (p - 1.0);

    EqualityVerdict v;
    v.tol = tol;
    v.relaxed_p2_hypothesis = p == 2.0;
    v.equality_of_mu = gap.equality;
    v.min_gap = gap.min_gap;

    const BlockOperator pa = power(abs(a), p);
    const BlockOperator qb = power(abs(b), q);
    v.power_identity_residual = max_abs_diff(pa, qb);
    v.kappa = 1.0 + std::pow(std::max(uniform_norm(a), uniform_norm(b)), std::max(p, q));
    v.range_coincidence =
        max_abs_diff(support_projection(a).op(), support_projection(b).op()) <= tol * v.kappa;
    v.theorem_consistent = !v.equality_of_mu || v.power_identity_residual <= tol * v.kappa;
    return v;
}

// Range coincidence under mu-equality, valid only away from p = 2.
inline PropertyReport range_coincidence_check(const BlockOperator& a, const BlockOperator& b,
                                              double p, double tol = 1e-9) {
    if (p == 2.0) throw DomainError("range_coincidence_check excludes p = 2");
    if (!(p > 1.0)) throw DomainError("range_coincidence_check requires p > 1");

    PropertyReport rep;
    const GapReport gap = young_gap(a, b, p, tol);
    if (!gap.equality) {
        rep.items.push_back({"mu_equality_hypothesis", true, false, -gap.max_abs_gap});
        rep.items.push_back({"supports_equal", false, true, 0.0});
        return rep;
    }
    rep.items.push_back({"mu_equality_hypothesis", true, true, 0.0});
    const double d = max_abs_diff(support_projection(a).op(), support_projection(b).op());
    rep.items.push_back({"supports_equal", true, d <= tol * (1.0 + uniform_norm(a)), -d});
    return rep;
}

// Saturation of the partial trace against commutation: for x >= 0 and a
// finite-trace projection, tau(Px) = integral_0^{tau(P)} mu(x) forces
// xP = Px. Both sides are reported so sweeps can test the implication.
struct SaturationReport {
    double trace_px = 0.0;
    double ky_fan_value = 0.0;
    double deficit = 0.0;
    bool saturated = false;
    double commutator_norm = 0.0;
    bool commutes = false;
    bool implication_holds = true;  // !saturated || commutes
};

inline SaturationReport trace_saturation_commutes(const BlockOperator& x, const Projection& P,
                                                  double tol = 1e-9) {
    if (!is_positive(x)) throw NotPositiveError("trace_saturation_commutes requires x >= 0");
    const double tp = P.trace();
    if (is_inf(tp)) throw DomainError("trace_saturation_commutes requires tau(P) finite");

    SaturationReport rep;
    rep.trace_px = trace(x * P.op()).real();
    rep.ky_fan_value = tp > 0.0 ? mu(x).integral(tp) : 0.0;
    rep.deficit = std::abs(rep.trace_px - rep.ky_fan_value);
    rep.saturated = rep.deficit <= tol * (1.0 + std::abs(rep.ky_fan_value));
    rep.commutator_norm = uniform_norm(x * P.op() - P.op() * x);
    rep.commutes = rep.commutator_norm <= tol * (1.0 + uniform_norm(x));
    rep.implication_holds = !rep.saturated || rep.commutes;
    return rep;
}

// Factorisation through a dominating operator: x x^* <= lambda y y^* yields
// a contraction c with x = y c and |c| <= sqrt(lambda). Throws
// MajorizationError carrying a witness direction when the domination fails.
inline BlockOperator douglas_factor(const BlockOperator& x, const BlockOperator& y, double lambda) {
    require_same_shape(x, y);
    if (!(lambda >= 0.0)) throw DomainError("douglas_factor requires lambda >= 0");

    const BlockOperator gap = cplx(lambda) * (y * adjoint(y)) - x * adjoint(x);
    const double scale = 1.0 + lambda * uniform_norm(y) * uniform_norm(y);
    for (int k = 0; k < gap.num_blocks(); ++k) {
        const auto e = hermitian_eig(cplx(0.5) * (gap.block(k) + gap.block(k).adjoint()));
        if (!e.values.empty() && e.values.back() < -kPositivityTol * scale) {
            std::vector<cplx> witness(static_cast<size_t>(e.vectors.dim()));
            const int col = e.vectors.dim() - 1;
            for (int r = 0; r < e.vectors.dim(); ++r) witness[static_cast<size_t>(r)] = e.vectors(r, col);
            throw MajorizationError("douglas_factor: majorization x x* <= lambda y y* violated", k,
                                    e.values.back(), std::move(witness));
        }
    }
    return pseudo_inverse(y) * x;
}

// Split of a into a part with finite trace of |.|^p and a bounded part, by
// cutting the spectrum of |a| at r = mu_t(a): a = a P(r, inf) + a P[0, r].
inline std::pair<BlockOperator, BlockOperator> lp_loc_split(const BlockOperator& a, double p,
                                                            double t) {
    if (!(p >= 1.0)) throw DomainError("lp_loc_split requires p >= 1");
    if (!(t > 0.0)) throw DomainError("lp_loc_split requires t > 0");
    const double r = mu_at(a, t);
    const Projection top = spectral_projection(a, Interval::above(r));
    const Projection rest = spectral_projection(a, Interval::up_to(r));
    return {a * top.op(), a * rest.op()};
}

// Independent equality oracle through norms alone: if the trace norm of ab
// saturates both the Hoelder bound |a|_p |b|_q and the Young bound
// (1/p)|a|_p^p + (1/q)|b|_q^q, then |a|^p = |b|^q. No singular value
// comparison is involved.
struct HoelderReport {
    double norm_ab_1 = 0.0;
    double norm_a_p = 0.0;
    double norm_b_q = 0.0;
    bool hoelder_saturated = false;
    bool young_saturated = false;
    double power_residual = 0.0;
    bool applicable = false;  // both saturations hold
    bool pass = true;         // applicable implies residual small
};

inline HoelderReport hoelder_equality_oracle(const BlockOperator& a, const BlockOperator& b,
                                             double p, double tol = 1e-9) {
    require_same_shape(a, b);
    if (!(p > 1.0)) throw DomainError("hoelder_equality_oracle requires p > 1");
    const double q = p / (p - 1.0);

    HoelderReport rep;
    rep.norm_ab_1 = mu(abs(a) * abs(b)).integral_full();
    rep.norm_a_p = std::pow(mu(a).power_integral(p), 1.0 / p);
    rep.norm_b_q = std::pow(mu(b).power_integral(q), 1.0 / q);
    if (is_inf(rep.norm_ab_1) || is_inf(rep.norm_a_p) || is_inf(rep.norm_b_q))
        throw InfiniteTraceError("hoelder_equality_oracle requires trace-class operands");

    const double scale = 1.0 + rep.norm_a_p * rep.norm_b_q;
    rep.hoelder_saturated = std::abs(rep.norm_ab_1 - rep.norm_a_p * rep.norm_b_q) <= tol * scale;
    rep.young_saturated =
        std::abs(std::pow(rep.norm_a_p, p) / p + std::pow(rep.norm_b_q, q) / q - rep.norm_ab_1) <=
        tol * scale;
    rep.applicable = rep.hoelder_saturated && rep.young_saturated;

    const double kappa = 1.0 + std::pow(std::max(uniform_norm(a), uniform_norm(b)), std::max(p, q));
    rep.power_residual = max_abs_diff(power(abs(a), p), power(abs(b), q));
    rep.pass = !rep.applicable || rep.power_residual <= tol * kappa;
    return rep;
}

// Monotone truncation limit: x_n = |a| P[0, r_n] with r_n sweeping the
// spectral quantiles up to |a|'s top. mu(x_n y_n) must be non-decreasing in
// n at every breakpoint, converge to mu(|a||b|) at the last level, and stay
// under mu(D) throughout.
inline PropertyReport truncation_limit_check(const BlockOperator& a, const BlockOperator& b,
                                             double p, int levels, double tol = 1e-9) {
    require_same_shape(a, b);
    if (!(p > 1.0)) throw DomainError("truncation_limit_check requires p > 1");
    if (levels < 1) throw DomainError("truncation_limit_check requires at least one level");
    const double q = p / (p - 1.0);

    const BlockOperator abs_a = abs(a);
    const BlockOperator abs_b = abs(b);
    const SingularValueFunction target = mu(abs_a * abs_b);
    const BlockOperator d_op = cplx(1.0 / p) * power(abs_a, p) + cplx(1.0 / q) * power(abs_b, q);
    const SingularValueFunction mu_d = mu(d_op);
    const double top_a = uniform_norm(abs_a), top_b = uniform_norm(abs_b);
    const double scale = 1.0 + mu_d.sup_level();

    PropertyReport rep;
    double monotone_margin = kInf, sandwich_margin = kInf;
    SingularValueFunction previous;  // mu of the zero operator
    SingularValueFunction last = previous;
    for (int n = 1; n <= levels; ++n) {
        const double frac = static_cast<double>(n) / levels;
        const BlockOperator x_n = abs_a * spectral_projection(abs_a, Interval::up_to(frac * top_a)).op();
        const BlockOperator y_n = abs_b * spectral_projection(abs_b, Interval::up_to(frac * top_b)).op();
        const SingularValueFunction current = mu(x_n * y_n);

        for (double s : breakpoint_union(previous, current)) {
            const double at = s > 0.0 ? s : 1e-300;
            monotone_margin = std::min(monotone_margin, current.value_at(at) - previous.value_at(at));
        }
        for (double s : breakpoint_union(current, mu_d)) {
            const double at = s > 0.0 ? s : 1e-300;
            sandwich_margin = std::min(sandwich_margin, mu_d.value_at(at) - current.value_at(at));
        }
        previous = current;
        last = current;
    }

    rep.items.push_back({"monotone_in_level", true, monotone_margin >= -tol * scale, monotone_margin});
    rep.items.push_back({"sandwiched_below_D", true, sandwich_margin >= -kYoungHardFloor, sandwich_margin});
    const double final_gap = max_abs_gap(last, target);
    rep.items.push_back({"limit_reaches_product", true, final_gap <= tol * scale, -final_gap});
    return rep;
}

}  // namespace snumlab
