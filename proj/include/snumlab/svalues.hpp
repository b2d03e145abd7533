#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "snumlab/algebra.hpp"
#include "snumlab/report.hpp"
#include "snumlab/step_function.hpp"

namespace snumlab {

// One singular value of one block together with the trace weight it carries.
// The (block, index) pair is the canonical tie-break for equal levels, so
// that the singular value function and the complete flag consume spectra in
// the same order.
struct SpectralAtom {
    double level = 0.0;
    double width = 0.0;
    int block = 0;
    int index = 0;
};

// Pooled singular values of |x| across blocks, sorted by level descending
// with the (block, index) tie-break, levels snapped to their merge-group
// representative. The eigenvector matrices come along for flag building.
struct PooledSpectrum {
    std::vector<SpectralAtom> atoms;
    std::vector<Matrix> bases;  // per block, columns in the block's own order
};

inline PooledSpectrum pooled_spectrum(const BlockOperator& x) {
    PooledSpectrum out;
    auto eigs = detail::abs_eig(x);
    for (int k = 0; k < x.num_blocks(); ++k) {
        const auto& e = eigs[static_cast<size_t>(k)];
        const double w = x.shape().blocks[static_cast<size_t>(k)].weight;
        for (size_t j = 0; j < e.values.size(); ++j)
            out.atoms.push_back(SpectralAtom{e.values[j], w, k, static_cast<int>(j)});
        out.bases.push_back(e.vectors);
    }
    std::stable_sort(out.atoms.begin(), out.atoms.end(), [](const SpectralAtom& a, const SpectralAtom& b) {
        if (a.level != b.level) return a.level > b.level;
        if (a.block != b.block) return a.block < b.block;
        return a.index < b.index;
    });
    // Snap each merge group to its leading level; groups at noise scale snap
    // to zero. Keeping flag and mu on identical level sequences makes their
    // cross-checks exact.
    double rep = kInf;
    for (auto& atom : out.atoms) {
        if (rep - atom.level > kLevelMergeTol) rep = atom.level;
        atom.level = rep <= kLevelMergeTol ? 0.0 : rep;
    }
    return out;
}

// The singular value function mu_s(x), the generalised inverse of the
// distribution function t -> tau(chi_(t,inf)(|x|)). Each singular value of
// block k contributes a segment of width w_k; the implicit infinite-weight
// zero block supplies the zero tail.
inline SingularValueFunction mu(const BlockOperator& x) {
    PooledSpectrum pool = pooled_spectrum(x);
    std::vector<Segment> segs;
    segs.reserve(pool.atoms.size());
    for (const auto& a : pool.atoms) segs.push_back(Segment{a.level, a.width});
    return SingularValueFunction::from_pool(std::move(segs));
}

inline double mu_at(const BlockOperator& x, double s) {
    if (!(s > 0.0)) throw DomainError("mu_at requires s > 0");
    return mu(x).value_at(s);
}

inline bool is_tau_compact(const BlockOperator& x) { return mu(x).tau_compact(); }

// Distribution function d(t) = tau(chi_(t,inf)(|x|)) as a left-continuous
// non-increasing step function with extended-real values.
class DistributionFunction {
public:
    explicit DistributionFunction(const BlockOperator& x) {
        for (const auto& a : pooled_spectrum(x).atoms) atoms_.push_back({a.level, a.width});
    }

    double operator()(double t) const {
        double d = 0.0;
        for (const auto& [level, width] : atoms_) {
            if (level > t) {
                d += width;
                if (is_inf(d)) return kInf;
            }
        }
        return d;
    }

    // Distinct spectral levels, descending; the jump points of d.
    std::vector<double> levels() const {
        std::vector<double> l;
        for (const auto& [level, width] : atoms_)
            if (l.empty() || l.back() != level) l.push_back(level);
        return l;
    }

private:
    std::vector<std::pair<double, double>> atoms_;
};

inline DistributionFunction distribution(const BlockOperator& x) { return DistributionFunction(x); }

// Exact integral of mu over (0, t).
inline double ky_fan_integral(const BlockOperator& x, double t) {
    if (!(t > 0.0)) throw DomainError("ky_fan_integral requires t > 0");
    return mu(x).integral(t);
}

namespace detail {

// Value of the best spectral sub-projection of trace at most t for a
// positive operator: a knapsack over the pooled atoms where diffuse-block
// atoms are divisible and atomic ones are all-or-nothing. At most one
// fractional atom is ever needed at an optimum.
inline double spectral_subset_sup(const BlockOperator& x, double t) {
    const PooledSpectrum pool = pooled_spectrum(x);
    const auto& atoms = pool.atoms;
    const size_t m = atoms.size();
    if (m > 20) throw OracleSizeError("spectral_subset_sup: too many atoms to enumerate");

    double best = 0.0;
    for (uint64_t mask = 0; mask < (uint64_t(1) << m); ++mask) {
        double tr = 0.0, val = 0.0;
        bool admissible = true;
        for (size_t i = 0; i < m && admissible; ++i) {
            if (mask & (uint64_t(1) << i)) {
                tr += atoms[i].width;
                val += ext_mul(atoms[i].level, atoms[i].width);
                if (tr > t || is_inf(tr)) admissible = false;
            }
        }
        if (!admissible) continue;
        best = std::max(best, val);
        const double room = t - tr;
        if (room <= 0.0) continue;
        // Top up with a fraction of one unused diffuse atom.
        for (size_t j = 0; j < m; ++j) {
            if (mask & (uint64_t(1) << j)) continue;
            if (!x.shape().blocks[static_cast<size_t>(atoms[j].block)].diffuse) continue;
            const double take = std::min(atoms[j].width, room);
            best = std::max(best, val + atoms[j].level * take);
        }
    }
    return best;
}

}  // namespace detail

// --- classical singular value identities -----------------------------------

// Width over which mu(ap) is strictly positive, minus tau(p); non-positive
// means mu_s(ap) = 0 for every s >= tau(p).
inline double mu_vanishing_excess(const BlockOperator& a, const Projection& p) {
    const double tp = p.trace();
    if (is_inf(tp)) return -kInf;  // no finite s reaches tau(p)
    const double support_width = mu(a * p.op()).positive_width();
    if (is_inf(support_width)) return kInf;
    return support_width - tp;
}

// The five standard facts about singular value functions, evaluated at the
// breakpoints of everything involved plus the supplied s, t:
//   1a. mu_s(x a y) <= |x| |y| mu_s(a)
//   1b. 0 <= a <= b implies mu_s(a) <= mu_s(b)      (when the operands comply)
//   2.  mu(|a b^*|) = mu(||a| |b||)
//   3.  mu_{s+t}(a + b) <= mu_s(a) + mu_t(b)
//   4.  mu_s(a p) = 0 for s >= tau(p), over the spectral projections of |b|
//   5.  tau(|a|) = integral of mu(a)
inline PropertyReport check_svalue_identities(const BlockOperator& x, const BlockOperator& y,
                                              const BlockOperator& a, const BlockOperator& b,
                                              double s, double t, double tol = 1e-9) {
    require_same_shape(a, b);
    require_same_shape(a, x);
    require_same_shape(a, y);
    PropertyReport rep;

    const SingularValueFunction mu_a = mu(a);
    const SingularValueFunction mu_b = mu(b);
    const double scale = 1.0 + std::max(mu_a.sup_level(), mu_b.sup_level());

    {  // 1a
        const SingularValueFunction mu_xay = mu(x * a * y);
        const double bound = uniform_norm(x) * uniform_norm(y);
        double margin = kInf;
        auto bp = breakpoint_union(mu_xay, mu_a);
        bp.push_back(s);
        for (double u : bp) {
            if (is_inf(u)) continue;
            const double at = u > 0.0 ? u : 1e-12;
            margin = std::min(margin, bound * mu_a.value_at(at) - mu_xay.value_at(at));
        }
        rep.items.push_back({"contraction_bound", true, margin >= -tol * (1.0 + bound) * scale, margin});
    }

    {  // 1b: only meaningful for positive comparable operands
        CheckItem item{"monotone_in_operator_order", false, true, 0.0};
        if (is_positive(a) && is_positive(b) && is_positive(b - a)) {
            item.applicable = true;
            double margin = kInf;
            for (double u : breakpoint_union(mu_a, mu_b)) {
                const double at = u > 0.0 ? u : 1e-12;
                margin = std::min(margin, mu_b.value_at(at) - mu_a.value_at(at));
            }
            item.margin = margin;
            item.pass = margin >= -tol * scale;
        }
        rep.items.push_back(item);
    }

    {  // 2
        const SingularValueFunction lhs = mu(a * adjoint(b));
        const SingularValueFunction rhs = mu(abs(a) * abs(b));
        const double gap = max_abs_gap(lhs, rhs);
        rep.items.push_back({"product_modulus_symmetry", true, gap <= tol * scale, -gap});
    }

    {  // 3
        const SingularValueFunction mu_ab = mu(a + b);
        std::vector<double> grid_s = mu_a.breakpoints();
        std::vector<double> grid_t = mu_b.breakpoints();
        grid_s.push_back(s);
        grid_t.push_back(t);
        double margin = kInf;
        for (double u : grid_s) {
            for (double v : grid_t) {
                const double su = u > 0.0 ? u : 1e-12;
                const double tv = v > 0.0 ? v : 1e-12;
                margin = std::min(margin,
                                  mu_a.value_at(su) + mu_b.value_at(tv) - mu_ab.value_at(su + tv));
            }
        }
        rep.items.push_back({"subadditive_shift", true, margin >= -tol * scale, margin});
    }

    {  // 4: spectral projections of |b| cut between consecutive levels
        CheckItem item{"projection_cutoff", false, true, 0.0};
        std::vector<double> levels = distribution(b).levels();
        levels.push_back(0.0);
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        for (size_t i = 0; i + 1 < levels.size(); ++i) {
            const double cut = 0.5 * (levels[i] + levels[i + 1]);
            const Projection p = spectral_projection(b, Interval::above(cut));
            if (is_inf(p.trace())) continue;
            item.applicable = true;
            const double excess = mu_vanishing_excess(a, p);
            item.margin = std::min(item.margin, -excess);
            if (excess > 0.0) item.pass = false;
        }
        rep.items.push_back(item);
    }

    {  // 5
        const double lhs = trace_positive(abs(a));
        const double rhs = mu_a.integral_full();
        CheckItem item{"trace_is_mu_integral", true, true, 0.0};
        if (is_inf(lhs) || is_inf(rhs)) {
            item.pass = is_inf(lhs) && is_inf(rhs);
            item.margin = item.pass ? 0.0 : -kInf;
        } else {
            const double diff = std::abs(lhs - rhs);
            item.pass = diff <= tol * (1.0 + std::abs(lhs));
            item.margin = -diff;
        }
        rep.items.push_back(item);
    }

    return rep;
}

// Orthogonal rigidity: for tau-compact a >= 0 and b >= 0 with ab = 0,
// equality mu(a + b) = mu(a) forces b = 0. Also records the distribution
// additivity tau(d_{a+b}) = tau(d_a) + tau(d_b) behind it.
inline PropertyReport check_orthogonal_rigidity(const BlockOperator& a, const BlockOperator& b,
                                                double tol = 1e-9) {
    require_same_shape(a, b);
    PropertyReport rep;

    const double scale = 1.0 + std::max(max_abs(a), max_abs(b));
    const bool hypotheses = is_positive(a) && is_positive(b) && is_tau_compact(a) &&
                            max_abs(a * b) <= 1e-10 * scale;
    rep.items.push_back({"hypotheses_met", true, hypotheses, 0.0});
    if (!hypotheses) {
        rep.items.push_back({"distribution_additivity", false, true, 0.0});
        rep.items.push_back({"rigidity", false, true, 0.0});
        return rep;
    }

    const BlockOperator sum = a + b;
    const DistributionFunction da = distribution(a), db = distribution(b), ds = distribution(sum);

    // Evaluate additivity strictly between spectral levels, away from jump noise.
    std::vector<double> levels = da.levels();
    for (double l : db.levels()) levels.push_back(l);
    for (double l : ds.levels()) levels.push_back(l);
    levels.push_back(0.0);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    bool additive = true;
    for (size_t i = 0; i + 1 < levels.size(); ++i) {
        const double t = 0.5 * (levels[i] + levels[i + 1]);
        const double lhs = ds(t), rhs = da(t) + db(t);
        if (is_inf(lhs) != is_inf(rhs)) additive = false;
        else if (!is_inf(lhs) && std::abs(lhs - rhs) > 1e-9) additive = false;
    }
    rep.items.push_back({"distribution_additivity", true, additive, 0.0});

    const bool mu_equal = approx_equal(mu(sum), mu(a), tol * scale);
    const bool b_zero = max_abs(b) <= tol * scale;
    rep.items.push_back({"rigidity", mu_equal, !mu_equal || b_zero, max_abs(b)});
    return rep;
}

// For tau-compact positive x the spectrum is the closure of the mu levels;
// both sides include zero through the ambient algebra. Refuses non
// tau-compact input, for which mu cannot determine the spectrum.
inline PropertyReport check_spectrum_recovery(const BlockOperator& x, double tol = 1e-9) {
    if (!is_positive(x)) throw NotPositiveError("check_spectrum_recovery requires x >= 0");
    if (!is_tau_compact(x))
        throw NonCompactError(
            "check_spectrum_recovery: operand is not tau-compact; its singular value "
            "function does not determine the spectrum");

    auto collapse = [tol](std::vector<double> v) {
        v.push_back(0.0);
        std::sort(v.begin(), v.end());
        std::vector<double> out;
        for (double t : v)
            if (out.empty() || t - out.back() > tol) out.push_back(t);
        return out;
    };

    std::vector<double> spectrum;
    for (int k = 0; k < x.num_blocks(); ++k)
        for (double v : hermitian_eig(x.block(k)).values) spectrum.push_back(std::max(0.0, v));
    std::vector<double> mu_levels;
    const SingularValueFunction f = mu(x);
    for (const Segment& s : f.segments()) mu_levels.push_back(s.level);

    const auto lhs = collapse(std::move(spectrum));
    const auto rhs = collapse(std::move(mu_levels));
    bool equal = lhs.size() == rhs.size();
    double worst = 0.0;
    if (equal)
        for (size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    equal = equal && worst <= tol;

    PropertyReport rep;
    rep.items.push_back({"spectrum_equals_mu_closure", true, equal, -worst});
    return rep;
}

}  // namespace snumlab
