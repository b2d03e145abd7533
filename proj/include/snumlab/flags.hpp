#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "snumlab/algebra.hpp"
#include "snumlab/report.hpp"
#include "snumlab/svalues.hpp"

namespace snumlab {

// One allocation entry of a complete flag: the eigenvector (block, index) of
// the decomposed operator, consumed with its full trace weight at `level`.
struct FlagAtom {
    double level = 0.0;
    double portion = 0.0;
    int block = 0;
    int index = 0;
};

// Complete flag of a positive tau-compact operator x: an increasing family
// of projections e_t with tau(e_t) = t and x = integral of mu de. Stored as
// the ordered allocation of positive-level eigenvectors; e_t is realised on
// demand as a blockwise projection, with a fractional diffuse coefficient
// when t cuts an atom. Mass beyond the positive spectrum is drawn from the
// ambient infinite diffuse zero block, so tau(e_t) = t for every t >= 0.
class CompleteFlag {
public:
    CompleteFlag(AlgebraShape shape, std::vector<FlagAtom> atoms, std::vector<Matrix> bases)
        : shape_(std::move(shape)), atoms_(std::move(atoms)), bases_(std::move(bases)) {
        cum_.reserve(atoms_.size() + 1);
        cum_.push_back(0.0);
        for (const auto& a : atoms_) cum_.push_back(cum_.back() + a.portion);
    }

    const AlgebraShape& shape() const { return shape_; }
    const std::vector<FlagAtom>& atoms() const { return atoms_; }

    // Total width of the strictly positive spectrum.
    double positive_width() const { return cum_.back(); }

    // tau(e_t) = t by construction.
    double trace_e(double t) const {
        if (!(t >= 0.0)) throw DomainError("flag parameter must be non-negative");
        return t;
    }

    // tau(x e_t): the allocation consumed up to t, grouped by level so the
    // arithmetic coincides exactly with the segment integral of mu.
    double trace_x_e(double t) const {
        if (!(t >= 0.0)) throw DomainError("flag parameter must be non-negative");
        double acc = 0.0, cum = 0.0;
        size_t i = 0;
        while (i < atoms_.size() && cum < t) {
            const double level = atoms_[i].level;
            double width = 0.0;
            for (; i < atoms_.size() && atoms_[i].level == level; ++i) width += atoms_[i].portion;
            const double take = std::min(width, t - cum);
            acc += level * take;
            cum += take;
        }
        return acc;
    }

    // The step function the allocation induces; equals mu of the decomposed
    // operator segment for segment.
    SingularValueFunction induced_mu() const {
        std::vector<Segment> pool;
        pool.reserve(atoms_.size());
        for (const auto& a : atoms_) pool.push_back(Segment{a.level, a.portion});
        return SingularValueFunction::from_pool(std::move(pool));
    }

    bool cut_aligned(double t) const {
        const auto it = std::lower_bound(cum_.begin(), cum_.end(), t);
        return it != cum_.end() && *it == t;
    }

    // e_t - e_s as a blockwise projection. Both endpoints must land on
    // allocation boundaries within the positive spectrum; a fractional cut
    // has no matrix representative.
    Projection window(double s, double t) const {
        if (!(0.0 <= s && s <= t)) throw DomainError("flag window endpoints out of order");
        if (!cut_aligned(s) || !cut_aligned(t))
            throw FlagError("flag cut is not an allocation boundary; the window is not a matrix projection");
        std::vector<Matrix> blocks;
        for (const auto& spec : shape_.blocks) blocks.push_back(Matrix::zero(spec.n));
        double cum = 0.0;
        for (const auto& a : atoms_) {
            if (cum >= t) break;
            if (cum >= s) {
                const Matrix& basis = bases_[static_cast<size_t>(a.block)];
                Matrix& target = blocks[static_cast<size_t>(a.block)];
                for (int r = 0; r < basis.dim(); ++r)
                    for (int c = 0; c < basis.dim(); ++c)
                        target(r, c) += basis(r, a.index) * std::conj(basis(c, a.index));
            }
            cum += a.portion;
        }
        return Projection(BlockOperator(shape_, std::move(blocks)));
    }

    Projection e(double t) const { return window(0.0, t); }

    // Sum of level * (eigenvector projector) over the allocation; reproduces
    // the decomposed operator up to eigensolver tolerance.
    BlockOperator reconstruct() const {
        std::vector<Matrix> blocks;
        for (const auto& spec : shape_.blocks) blocks.push_back(Matrix::zero(spec.n));
        for (const auto& a : atoms_) {
            const Matrix& basis = bases_[static_cast<size_t>(a.block)];
            Matrix& target = blocks[static_cast<size_t>(a.block)];
            for (int r = 0; r < basis.dim(); ++r)
                for (int c = 0; c < basis.dim(); ++c)
                    target(r, c) += a.level * basis(r, a.index) * std::conj(basis(c, a.index));
        }
        return BlockOperator(shape_, std::move(blocks));
    }

private:
    AlgebraShape shape_;
    std::vector<FlagAtom> atoms_;
    std::vector<double> cum_;
    std::vector<Matrix> bases_;
};

// Build the complete flag of x >= 0, tau-compact. Equal levels are consumed
// in (block, eigenvector index) order, making the flag deterministic. Every
// block carrying positive spectrum must be diffuse, otherwise intermediate
// traces are unattainable and the flag is refused.
inline CompleteFlag build_flag(const BlockOperator& x) {
    if (!is_positive(x)) throw NotPositiveError("build_flag requires x >= 0");
    if (!is_tau_compact(x)) throw NonCompactError("build_flag requires a tau-compact operand");

    PooledSpectrum pool = pooled_spectrum(x);
    std::vector<FlagAtom> atoms;
    for (const auto& a : pool.atoms) {
        if (a.level <= 0.0) continue;
        if (!x.shape().blocks[static_cast<size_t>(a.block)].diffuse)
            throw FlagError("flag not constructible in atomic model: positive spectrum on a non-diffuse block");
        atoms.push_back(FlagAtom{a.level, a.width, a.block, a.index});
    }
    return CompleteFlag(x.shape(), std::move(atoms), std::move(pool.bases));
}

// x viewed inside its diffuse enlargement: same matrices, every weight now a
// divisible interval length. The singular value function is unchanged
// segment for segment.
inline BlockOperator embed_diffuse(const BlockOperator& x) {
    AlgebraShape shape = x.shape();
    for (auto& b : shape.blocks) b.diffuse = true;
    return BlockOperator(shape, x.blocks());
}

// Replays the inverse-compression construction behind the equality theorem
// on a finite invertible model: with e the flag of |ab| and e_I = e_t - e_s,
// the operator c_I = b^{-1} e_I b^{-1} satisfies a chain of identities, and
// the equality case mu(ab) = mu(D) is precisely when the trailing
// saturation/commutation steps go through. Reports every link separately.
inline PropertyReport check_flag_compression(const BlockOperator& a, const BlockOperator& b,
                                             double s, double t, double p = 2.0,
                                             double tol = 1e-9) {
    require_same_shape(a, b);
    if (a.shape().total_dim() > 16)
        throw OracleSizeError("check_flag_compression: explicit inverses refused beyond total dimension 16");
    if (!is_positive(a) || !is_positive(b))
        throw NotPositiveError("check_flag_compression requires a, b >= 0");
    if (!(p > 1.0)) throw DomainError("check_flag_compression requires p > 1");
    const double q = p / (p - 1.0);

    const BlockOperator ab = a * b;
    const BlockOperator ab_abs = abs(ab);
    const CompleteFlag flag = build_flag(embed_diffuse(ab_abs));

    const BlockOperator b_diff = embed_diffuse(b);
    const BlockOperator a_diff = embed_diffuse(a);
    BlockOperator b_inv = [&] {
        try {
            return power(b_diff, -1.0);
        } catch (const SingularOperandError&) {
            throw SingularOperandError("check_flag_compression requires b invertible");
        }
    }();

    const Projection e_I = flag.window(s, t);
    const Projection e_t = flag.window(0.0, t);
    const BlockOperator c_I = b_inv * e_I.op() * b_inv;
    const BlockOperator c_t = b_inv * e_t.op() * b_inv;
    const double lambda_t = mu_at(ab_abs, t);

    PropertyReport rep;
    const double scale = 1.0 + std::max({max_abs(a), max_abs(b), max_abs(c_I)});

    auto psd_margin = [](const BlockOperator& m) {
        double worst = kInf;
        for (int k = 0; k < m.num_blocks(); ++k) {
            const auto e = hermitian_eig(cplx(0.5) * (m.block(k) + m.block(k).adjoint()));
            if (!e.values.empty()) worst = std::min(worst, e.values.back());
        }
        return worst;
    };

    {
        const double d = max_abs_diff(b_diff * c_I * b_diff, e_I.op());
        rep.items.push_back({"b_cI_b_recovers_eI", true, d <= tol * scale, -d});
    }
    {
        const double m = psd_margin(c_I);
        rep.items.push_back({"cI_positive", true, m >= -tol * scale, m});
    }
    {
        const double m = psd_margin(a_diff * a_diff - cplx(lambda_t * lambda_t) * c_I);
        rep.items.push_back({"a2_dominates_cI", true, m >= -tol * scale * scale, m});
    }

    const Projection f_I = support_projection(c_I);
    const Projection f_t = support_projection(c_t);
    {
        const double m = psd_margin(f_I.op() * a_diff * a_diff * f_I.op() - cplx(lambda_t * lambda_t) * c_I);
        rep.items.push_back({"compressed_a2_dominates_cI", true, m >= -tol * scale * scale, m});
    }
    {
        const BlockOperator lhs = f_I.op() * b_diff * b_diff * f_I.op() * c_I;
        const BlockOperator rhs = c_I * f_I.op() * b_diff * b_diff * f_I.op();
        const double d1 = max_abs_diff(lhs, f_I.op());
        const double d2 = max_abs_diff(rhs, f_I.op());
        rep.items.push_back({"fI_b2_fI_inverts_cI", true, std::max(d1, d2) <= tol * scale * scale, -std::max(d1, d2)});
    }
    {
        // f_I c_J = c_{I intersect J} = c_J f_I with J = [0, t].
        const BlockOperator lhs = f_I.op() * c_t;
        const BlockOperator rhs = c_t * f_I.op();
        const double d = std::max(max_abs_diff(lhs, c_I), max_abs_diff(rhs, c_I));
        rep.items.push_back({"window_compression_intersects", true, d <= tol * scale, -d});
    }
    {
        // tau(f_I) = tau(e_I), read off the supports of b c_I and c_I b.
        const double t1 = support_projection(b_diff * c_I).trace();
        const double t2 = support_projection(c_I * b_diff).trace();
        const double te = e_I.trace();
        const bool ok = t1 == te && t2 == te && f_I.trace() == te;
        rep.items.push_back({"window_traces_match", true, ok, ok ? 0.0 : -1.0});
    }
    {
        // The commutative Young step: lambda_t f_I <= f_I D f_I.
        const BlockOperator d_op = cplx(1.0 / p) * power(a_diff, p) + cplx(1.0 / q) * power(b_diff, q);
        const double m = psd_margin(f_I.op() * d_op * f_I.op() - cplx(lambda_t) * f_I.op());
        rep.items.push_back({"young_step", true, m >= -tol * scale * scale, m});

        // Saturation tau(D f_t) = integral_0^t mu(ab); in the equality case
        // this is exact and forces D to commute with the flag.
        const double lhs = trace(d_op * f_t.op()).real();
        const double rhs = mu(ab_abs).integral(t);
        const double deficit = std::abs(lhs - rhs);
        rep.items.push_back({"trace_saturation", true, deficit <= tol * (1.0 + std::abs(rhs)), -deficit});

        const double comm = uniform_norm(d_op * f_t.op() - f_t.op() * d_op);
        rep.items.push_back({"D_commutes_with_flag", true, comm <= tol * scale, -comm});
    }
    {
        const double d = max_abs_diff(f_t.op(), e_t.op());
        rep.items.push_back({"f_equals_e", true, d <= tol * scale, -d});
    }
    return rep;
}

}  // namespace snumlab
