#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "snumlab/errors.hpp"
#include "snumlab/extreal.hpp"

namespace snumlab {

// Adjacent pooled levels closer than this are merged into one segment so
// that eigensolver noise does not fragment the step function.
inline constexpr double kLevelMergeTol = 1e-12;

struct Segment {
    double level = 0.0;
    double width = 0.0;  // extended real; only the final width may be +inf

    friend bool operator==(const Segment&, const Segment&) = default;
};

// Right-continuous non-increasing step function on (0, inf), stored as
// (level, width) segments with strictly decreasing levels. The total width
// is always infinite: either the zero tail of the ambient algebra or, for a
// non tau-compact operator, a positive level of infinite width ends the list.
class SingularValueFunction {
public:
    SingularValueFunction() : seg_{{0.0, kInf}} {}

    // Pool of (level, width) contributions in any order of levels; ties must
    // already be in the caller's canonical order, the sort here is stable.
    static SingularValueFunction from_pool(std::vector<Segment> pool) {
        std::stable_sort(pool.begin(), pool.end(),
                         [](const Segment& a, const Segment& b) { return a.level > b.level; });
        pool.push_back(Segment{0.0, kInf});

        std::vector<Segment> merged;
        for (const Segment& s : pool) {
            if (s.width <= 0.0) continue;
            if (!merged.empty() && merged.back().level - s.level <= kLevelMergeTol) {
                merged.back().width += s.width;
            } else {
                merged.push_back(s);
            }
            if (is_inf(merged.back().width)) break;  // lower levels are never reached
        }
        // Trailing eigensolver noise merged into the infinite tail reads as zero.
        if (is_inf(merged.back().width) && merged.back().level <= kLevelMergeTol)
            merged.back().level = 0.0;

        SingularValueFunction f;
        f.seg_ = std::move(merged);
        return f;
    }

    const std::vector<Segment>& segments() const { return seg_; }

    // Value as s -> 0+, i.e. the uniform norm of the underlying operator.
    double sup_level() const { return seg_.front().level; }

    // Evaluate at s > 0; constant on [start, start + width).
    double value_at(double s) const {
        if (!(s > 0.0)) throw DomainError("singular value function is defined for s > 0");
        double cum = 0.0;
        for (const Segment& seg : seg_) {
            if (s < cum + seg.width) return seg.level;
            cum += seg.width;
        }
        return 0.0;  // unreachable: total width is infinite
    }

    // Every segment of infinite width sits at level zero.
    bool tau_compact() const { return seg_.back().level == 0.0; }

    // Width over which the function is strictly positive (extended real).
    double positive_width() const {
        double w = 0.0;
        for (const Segment& seg : seg_) {
            if (seg.level <= 0.0) break;
            w += seg.width;
            if (is_inf(w)) return kInf;
        }
        return w;
    }

    // Exact integral over (0, t) of the step function.
    double integral(double t) const {
        if (!(t >= 0.0)) throw DomainError("integral endpoint must be non-negative");
        double acc = 0.0, cum = 0.0;
        for (const Segment& seg : seg_) {
            if (t <= cum) break;
            const double take = std::min(seg.width, t - cum);
            acc += seg.level * take;
            cum += take;
        }
        return acc;
    }

    // Integral of level^p over (0, inf); +inf when a positive level has
    // infinite width.
    double power_integral(double p) const {
        double acc = 0.0;
        for (const Segment& seg : seg_) {
            if (seg.level <= 0.0) continue;
            const double term = ext_mul(std::pow(seg.level, p), seg.width);
            if (is_inf(term)) return kInf;
            acc += term;
        }
        return acc;
    }

    double integral_full() const { return power_integral(1.0); }

    // Finite cumulative segment starts: 0, w_1, w_1 + w_2, ...
    std::vector<double> breakpoints() const {
        std::vector<double> bp;
        double cum = 0.0;
        for (const Segment& seg : seg_) {
            bp.push_back(cum);
            if (is_inf(seg.width)) break;
            cum += seg.width;
        }
        return bp;
    }

    // mu restricted to (0, t), then zero: the exact truncation used by the
    // local-integrability decomposition.
    SingularValueFunction truncated(double t) const {
        std::vector<Segment> pool;
        double cum = 0.0;
        for (const Segment& seg : seg_) {
            if (cum >= t || seg.level <= 0.0) break;
            pool.push_back(Segment{seg.level, std::min(seg.width, t - cum)});
            cum += seg.width;
        }
        return from_pool(std::move(pool));
    }

    friend bool operator==(const SingularValueFunction&, const SingularValueFunction&) = default;

private:
    std::vector<Segment> seg_;
};

// Sorted union of the finite breakpoints of two step functions; evaluating
// both at each union point covers every value the pair takes.
inline std::vector<double> breakpoint_union(const SingularValueFunction& f,
                                            const SingularValueFunction& g) {
    std::vector<double> u = f.breakpoints();
    const std::vector<double> v = g.breakpoints();
    u.insert(u.end(), v.begin(), v.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

// Largest |f - g| over the union of breakpoints.
inline double max_abs_gap(const SingularValueFunction& f, const SingularValueFunction& g) {
    double m = std::abs(f.sup_level() - g.sup_level());
    for (double s : breakpoint_union(f, g)) {
        if (s <= 0.0) continue;
        m = std::max(m, std::abs(f.value_at(s) - g.value_at(s)));
    }
    return m;
}

inline bool approx_equal(const SingularValueFunction& f, const SingularValueFunction& g,
                         double tol = 1e-9) {
    if (f.tau_compact() != g.tau_compact()) return false;
    return max_abs_gap(f, g) <= tol;
}

}  // namespace snumlab
