#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "snumlab/errors.hpp"
#include "snumlab/extreal.hpp"
#include "snumlab/hermitian_eig.hpp"
#include "snumlab/matrix.hpp"

namespace snumlab {

// Eigenvalues in [-kPositivityTol, 0) are treated as roundoff and clamped to
// zero by the positive functional calculus; anything lower is an error.
inline constexpr double kPositivityTol = 1e-10;

// Relative threshold below which a singular value counts as zero when a
// support projection or pseudo-inverse is formed.
inline constexpr double kRankTol = 1e-10;

// One matrix factor of the model algebra: dimension, trace weight and
// whether the weight is a divisible interval length. Infinite weight is only
// meaningful on diffuse blocks.
struct BlockSpec {
    int n = 1;
    double weight = 1.0;
    bool diffuse = false;

    friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

// Finite direct sum of weighted matrix factors. Semantically every shape is
// augmented by an implicit infinite-weight diffuse block carrying only the
// zero operator, so the trace of the ambient identity is infinite and zero
// belongs to every spectrum; that block is never materialised.
struct AlgebraShape {
    std::vector<BlockSpec> blocks;

    int total_dim() const {
        int d = 0;
        for (const auto& b : blocks) d += b.n;
        return d;
    }

    // Trace of the identity over the explicit blocks (extended real).
    double explicit_trace() const {
        double t = 0.0;
        for (const auto& b : blocks) t += ext_mul(b.weight, static_cast<double>(b.n));
        return t;
    }

    bool valid() const {
        if (blocks.empty()) return false;
        for (const auto& b : blocks) {
            if (b.n < 1) return false;
            if (!(b.weight > 0.0)) return false;
            if (is_inf(b.weight) && !b.diffuse) return false;
        }
        return true;
    }

    friend bool operator==(const AlgebraShape&, const AlgebraShape&) = default;
};

inline AlgebraShape single_block_shape(int n, double weight = 1.0, bool diffuse = false) {
    return AlgebraShape{{BlockSpec{n, weight, diffuse}}};
}

// An element of the model algebra: one matrix per shape block. Values are
// immutable after construction; all operations below are pure.
class BlockOperator {
public:
    BlockOperator(AlgebraShape shape, std::vector<Matrix> blocks)
        : shape_(std::move(shape)), blocks_(std::move(blocks)) {
        if (!shape_.valid()) throw DomainError("invalid algebra shape");
        if (blocks_.size() != shape_.blocks.size())
            throw ShapeMismatchError("block count does not match shape");
        for (size_t k = 0; k < blocks_.size(); ++k)
            if (blocks_[k].dim() != shape_.blocks[k].n)
                throw ShapeMismatchError("block dimension does not match shape");
    }

    static BlockOperator zero(const AlgebraShape& shape) {
        std::vector<Matrix> b;
        b.reserve(shape.blocks.size());
        for (const auto& s : shape.blocks) b.push_back(Matrix::zero(s.n));
        return BlockOperator(shape, std::move(b));
    }

    static BlockOperator identity(const AlgebraShape& shape) {
        std::vector<Matrix> b;
        b.reserve(shape.blocks.size());
        for (const auto& s : shape.blocks) b.push_back(Matrix::identity(s.n));
        return BlockOperator(shape, std::move(b));
    }

    const AlgebraShape& shape() const { return shape_; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    const Matrix& block(int k) const { return blocks_[static_cast<size_t>(k)]; }
    const std::vector<Matrix>& blocks() const { return blocks_; }

    BlockOperator with_blocks(std::vector<Matrix> b) const { return BlockOperator(shape_, std::move(b)); }

private:
    AlgebraShape shape_;
    std::vector<Matrix> blocks_;
};

// Diagonal operator on a single block of the given weight; the workhorse of
// hand-computed fixtures.
inline BlockOperator diag_op(const std::vector<double>& d, double weight = 1.0, bool diffuse = false) {
    return BlockOperator(single_block_shape(static_cast<int>(d.size()), weight, diffuse),
                         {Matrix::diagonal(d)});
}

inline void require_same_shape(const BlockOperator& a, const BlockOperator& b) {
    if (!(a.shape() == b.shape()))
        throw ShapeMismatchError("operands live in different model algebras");
}

inline BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
    require_same_shape(a, b);
    std::vector<Matrix> r;
    r.reserve(a.blocks().size());
    for (int k = 0; k < a.num_blocks(); ++k) r.push_back(a.block(k) + b.block(k));
    return a.with_blocks(std::move(r));
}

inline BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
    require_same_shape(a, b);
    std::vector<Matrix> r;
    r.reserve(a.blocks().size());
    for (int k = 0; k < a.num_blocks(); ++k) r.push_back(a.block(k) - b.block(k));
    return a.with_blocks(std::move(r));
}

inline BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
    require_same_shape(a, b);
    std::vector<Matrix> r;
    r.reserve(a.blocks().size());
    for (int k = 0; k < a.num_blocks(); ++k) r.push_back(a.block(k) * b.block(k));
    return a.with_blocks(std::move(r));
}

inline BlockOperator operator*(cplx c, const BlockOperator& a) {
    std::vector<Matrix> r;
    r.reserve(a.blocks().size());
    for (int k = 0; k < a.num_blocks(); ++k) r.push_back(c * a.block(k));
    return a.with_blocks(std::move(r));
}

inline BlockOperator adjoint(const BlockOperator& a) {
    std::vector<Matrix> r;
    r.reserve(a.blocks().size());
    for (int k = 0; k < a.num_blocks(); ++k) r.push_back(a.block(k).adjoint());
    return a.with_blocks(std::move(r));
}

inline double max_abs(const BlockOperator& a) {
    double m = 0.0;
    for (int k = 0; k < a.num_blocks(); ++k) m = std::max(m, max_abs(a.block(k)));
    return m;
}

inline double max_abs_diff(const BlockOperator& a, const BlockOperator& b) {
    require_same_shape(a, b);
    double m = 0.0;
    for (int k = 0; k < a.num_blocks(); ++k) m = std::max(m, max_abs_diff(a.block(k), b.block(k)));
    return m;
}

// Scale-aware operator equality: entrywise max-modulus difference within
// tol * (1 + scale of the larger operand).
inline bool approx_equal(const BlockOperator& a, const BlockOperator& b, double tol = 1e-9) {
    return max_abs_diff(a, b) <= tol * (1.0 + std::max(max_abs(a), max_abs(b)));
}

inline bool is_hermitian(const BlockOperator& a, double tol = 1e-12) {
    for (int k = 0; k < a.num_blocks(); ++k)
        if (!is_hermitian(a.block(k), tol)) return false;
    return true;
}

inline bool is_zero(const BlockOperator& a, double tol = 0.0) { return max_abs(a) <= tol; }

// Whether every infinite-weight block carries the zero matrix; operators
// failing this are not trace class and not tau-compact.
inline bool infinite_blocks_vanish(const BlockOperator& a, double tol = 0.0) {
    for (int k = 0; k < a.num_blocks(); ++k)
        if (is_inf(a.shape().blocks[static_cast<size_t>(k)].weight) && max_abs(a.block(k)) > tol)
            return false;
    return true;
}

// Scalar trace, defined for trace-class operators only.
inline cplx trace(const BlockOperator& a) {
    if (!infinite_blocks_vanish(a))
        throw InfiniteTraceError("operator has a nonzero infinite-weight block: trace is infinite");
    cplx t = 0.0;
    for (int k = 0; k < a.num_blocks(); ++k) {
        const double w = a.shape().blocks[static_cast<size_t>(k)].weight;
        if (is_inf(w)) continue;  // zero block, contributes inf * 0 = 0
        t += w * a.block(k).trace();
    }
    return t;
}

// Trace of a positive operator as an extended real; +inf when an
// infinite-weight block is nonzero.
inline double trace_positive(const BlockOperator& a) {
    double t = 0.0;
    for (int k = 0; k < a.num_blocks(); ++k) {
        const double w = a.shape().blocks[static_cast<size_t>(k)].weight;
        const double tr = a.block(k).trace().real();
        if (is_inf(w)) {
            if (max_abs(a.block(k)) > 0.0) return kInf;
            continue;
        }
        t += w * tr;
    }
    return t;
}

namespace detail {

inline HermitianEig sorted_descending(HermitianEig e) {
    std::vector<int> order(e.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return e.values[static_cast<size_t>(i)] > e.values[static_cast<size_t>(j)];
    });
    HermitianEig sorted;
    sorted.values.resize(e.values.size());
    sorted.vectors = Matrix(e.vectors.dim());
    for (int c = 0; c < e.vectors.dim(); ++c) {
        sorted.values[static_cast<size_t>(c)] = e.values[static_cast<size_t>(order[static_cast<size_t>(c)])];
        for (int r = 0; r < e.vectors.dim(); ++r)
            sorted.vectors(r, c) = e.vectors(r, order[static_cast<size_t>(c)]);
    }
    return sorted;
}

// Hermitian eigendecomposition of |a| per block: non-negative values in
// non-increasing order with matching eigenvectors. Hermitian operands use
// their own eigenbasis (|a| = sum |lambda_i| v_i v_i^*); general operands go
// through a^* a.
inline std::vector<HermitianEig> abs_eig(const BlockOperator& a) {
    std::vector<HermitianEig> out;
    out.reserve(a.blocks().size());
    for (int k = 0; k < a.num_blocks(); ++k) {
        const Matrix& m = a.block(k);
        if (is_hermitian(m)) {
            HermitianEig e = hermitian_eig(m);
            for (auto& v : e.values) v = std::abs(v);
            out.push_back(sorted_descending(std::move(e)));
        } else {
            HermitianEig e = hermitian_eig(m.adjoint() * m);
            // The quadratic route loses half the precision near zero;
            // re-evaluate each singular value as |m v| on its eigenvector.
            for (size_t j = 0; j < e.values.size(); ++j) {
                double s = 0.0;
                for (int r = 0; r < m.dim(); ++r) {
                    cplx acc = 0.0;
                    for (int c = 0; c < m.dim(); ++c)
                        acc += m(r, c) * e.vectors(c, static_cast<int>(j));
                    s += std::norm(acc);
                }
                e.values[j] = std::sqrt(s);
            }
            out.push_back(sorted_descending(std::move(e)));
        }
    }
    return out;
}

inline HermitianEig positive_eig(const Matrix& m, const char* who) {
    if (!is_hermitian(m, 1e-10)) throw NotPositiveError(std::string(who) + ": operand is not Hermitian");
    HermitianEig e = hermitian_eig(m);
    const double scale = std::max(1.0, std::abs(e.values.empty() ? 0.0 : e.values.front()));
    for (auto& v : e.values) {
        if (v < -kPositivityTol * scale)
            throw NotPositiveError(std::string(who) + ": operand has a negative eigenvalue");
        if (v < 0.0) v = 0.0;
    }
    return e;
}

}  // namespace detail

// |a| = (a^* a)^{1/2}, blockwise.
inline BlockOperator abs(const BlockOperator& a) {
    auto eigs = detail::abs_eig(a);
    std::vector<Matrix> r;
    r.reserve(eigs.size());
    for (const auto& e : eigs) r.push_back(assemble(e, e.values));
    return a.with_blocks(std::move(r));
}

inline bool is_positive(const BlockOperator& a, double tol = kPositivityTol) {
    if (!is_hermitian(a, 1e-10)) return false;
    for (int k = 0; k < a.num_blocks(); ++k) {
        HermitianEig e = hermitian_eig(a.block(k));
        const double scale = std::max(1.0, max_abs(a.block(k)));
        for (double v : e.values)
            if (v < -tol * scale) return false;
    }
    return true;
}

// Positive functional calculus a -> a^r. Negative exponents require the
// operand to be invertible within kRankTol.
inline BlockOperator power(const BlockOperator& a, double r) {
    std::vector<Matrix> out;
    out.reserve(a.blocks().size());
    for (int k = 0; k < a.num_blocks(); ++k) {
        HermitianEig e = detail::positive_eig(a.block(k), "power");
        const double top = e.values.empty() ? 0.0 : e.values.front();
        std::vector<double> mapped(e.values.size());
        for (size_t i = 0; i < e.values.size(); ++i) {
            const double v = e.values[i];
            if (r < 0.0) {
                if (v <= kRankTol * std::max(1.0, top))
                    throw SingularOperandError("power: negative exponent on a singular operand");
                mapped[i] = std::pow(v, r);
            } else {
                mapped[i] = (v == 0.0) ? 0.0 : std::pow(v, r);
            }
        }
        out.push_back(assemble(e, mapped));
    }
    return a.with_blocks(std::move(out));
}

// Interval of the non-negative half line with open or closed ends; the upper
// end may be +inf.
struct Interval {
    double lo = 0.0;
    double hi = kInf;
    bool lo_open = true;
    bool hi_open = true;

    bool contains(double t) const {
        if (lo_open ? !(t > lo) : !(t >= lo)) return false;
        if (hi_open ? !(t < hi) : !(t <= hi)) return false;
        return true;
    }

    static Interval above(double t) { return Interval{t, kInf, true, true}; }          // (t, inf)
    static Interval up_to(double r) { return Interval{0.0, r, false, false}; }         // [0, r]
    static Interval open(double a, double b) { return Interval{a, b, true, true}; }
    static Interval closed(double a, double b) { return Interval{a, b, false, false}; }
    static Interval left_open(double a, double b) { return Interval{a, b, true, false}; }  // (a, b]
};

// Blockwise Hermitian idempotent with its trace.
class Projection {
public:
    explicit Projection(BlockOperator p, double tol = 1e-9)
        : op_(std::move(p)) {
        const double scale = 1.0 + max_abs(op_);
        for (int k = 0; k < op_.num_blocks(); ++k) {
            const Matrix& m = op_.block(k);
            if (!is_hermitian(m, 1e-9)) throw DomainError("projection blocks must be Hermitian");
            if (max_abs_diff(m * m, m) > tol * scale)
                throw DomainError("projection blocks must be idempotent");
        }
    }

    const BlockOperator& op() const { return op_; }
    const AlgebraShape& shape() const { return op_.shape(); }

    int rank(int k) const {
        return static_cast<int>(std::lround(op_.block(k).trace().real()));
    }

    // tau(P) = sum w_k rank(P_k), extended real.
    double trace() const {
        double t = 0.0;
        for (int k = 0; k < op_.num_blocks(); ++k)
            t += ext_mul(op_.shape().blocks[static_cast<size_t>(k)].weight, static_cast<double>(rank(k)));
        return t;
    }

private:
    BlockOperator op_;
};

// Spectral projection chi_B(|a|) over the explicit blocks. The implicit
// zero block is never materialised: it only matters through the infinite
// zero tail of the singular value function.
inline Projection spectral_projection(const BlockOperator& a, const Interval& window) {
    auto eigs = detail::abs_eig(a);
    std::vector<Matrix> out;
    out.reserve(eigs.size());
    for (const auto& e : eigs) {
        std::vector<double> ind(e.values.size());
        for (size_t i = 0; i < e.values.size(); ++i)
            ind[i] = window.contains(e.values[i]) ? 1.0 : 0.0;
        out.push_back(assemble(e, ind));
    }
    return Projection(a.with_blocks(std::move(out)));
}

// Projection onto the closure of the range of |a| (= of a^*), with the
// rank-revealing threshold kRankTol relative to the largest singular value.
inline Projection support_projection(const BlockOperator& a) {
    auto eigs = detail::abs_eig(a);
    double top = 0.0;
    for (const auto& e : eigs)
        if (!e.values.empty()) top = std::max(top, e.values.front());
    const double cut = kRankTol * std::max(1.0, top);
    std::vector<Matrix> out;
    out.reserve(eigs.size());
    for (const auto& e : eigs) {
        std::vector<double> ind(e.values.size());
        for (size_t i = 0; i < e.values.size(); ++i) ind[i] = e.values[i] > cut ? 1.0 : 0.0;
        out.push_back(assemble(e, ind));
    }
    return Projection(a.with_blocks(std::move(out)));
}

// Largest singular value across blocks (the uniform norm of the operator).
inline double uniform_norm(const BlockOperator& a) {
    auto eigs = detail::abs_eig(a);
    double m = 0.0;
    for (const auto& e : eigs)
        if (!e.values.empty()) m = std::max(m, e.values.front());
    return m;
}

// Moore-Penrose inverse via the singular decomposition of each block;
// singular values at or below rel_cut * (largest) are treated as zero.
inline BlockOperator pseudo_inverse(const BlockOperator& a, double rel_cut = 1e-12) {
    std::vector<Matrix> out;
    out.reserve(a.blocks().size());
    auto eigs = detail::abs_eig(a);  // |a| = V s V^*, a = nu |a|
    double top = 0.0;
    for (const auto& e : eigs)
        if (!e.values.empty()) top = std::max(top, e.values.front());
    const double cut = rel_cut * std::max(1.0, top);
    for (int k = 0; k < a.num_blocks(); ++k) {
        const auto& e = eigs[static_cast<size_t>(k)];
        std::vector<double> invsq(e.values.size());
        for (size_t i = 0; i < e.values.size(); ++i)
            invsq[i] = e.values[i] > cut ? 1.0 / (e.values[i] * e.values[i]) : 0.0;
        // a^+ = (a^* a)^+ a^* = V diag(1/s^2) V^* a^*.
        out.push_back(assemble(e, invsq) * a.block(k).adjoint());
    }
    return a.with_blocks(std::move(out));
}

// Polar decomposition a = nu |a| with nu a partial isometry whose initial
// projection is the support of |a|.
struct PolarData {
    BlockOperator partial_isometry;
    BlockOperator modulus;
};

inline PolarData polar(const BlockOperator& a) {
    auto eigs = detail::abs_eig(a);
    double top = 0.0;
    for (const auto& e : eigs)
        if (!e.values.empty()) top = std::max(top, e.values.front());
    const double cut = kRankTol * std::max(1.0, top);

    std::vector<Matrix> modulus, isometry;
    modulus.reserve(eigs.size());
    isometry.reserve(eigs.size());
    for (int k = 0; k < a.num_blocks(); ++k) {
        const auto& e = eigs[static_cast<size_t>(k)];
        modulus.push_back(assemble(e, e.values));
        std::vector<double> inv(e.values.size());
        for (size_t i = 0; i < e.values.size(); ++i)
            inv[i] = e.values[i] > cut ? 1.0 / e.values[i] : 0.0;
        isometry.push_back(a.block(k) * assemble(e, inv));
    }
    return PolarData{a.with_blocks(std::move(isometry)), a.with_blocks(std::move(modulus))};
}

}  // namespace snumlab
