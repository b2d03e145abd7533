#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "snumlab/algebra.hpp"
#include "snumlab/svalues.hpp"

namespace snumlab {

// Counter-based 64-bit generator: output i of stream (seed) is
// splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15). The mapping is fixed so
// that a seed printed in a report reproduces a run on any implementation.
class CounterRng {
public:
    explicit CounterRng(uint64_t seed) : seed_(seed) {}

    uint64_t next_u64() {
        uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 significant bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

    double exponential(double mean = 1.0) {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return -mean * std::log(u);
    }

    double gaussian() {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
    }

    cplx complex_gaussian() {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        const double v = uniform();
        const double r = std::sqrt(-std::log(u));
        return cplx(r * std::cos(6.283185307179586 * v), r * std::sin(6.283185307179586 * v));
    }

    // Independent stream for case `index`; safe to hand to parallel sweeps.
    CounterRng fork(uint64_t index) const {
        uint64_t z = seed_ ^ (0xD1B54A32D192ED03ULL + index * 0x2545F4914F6CDD1DULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return CounterRng(z ^ (z >> 31));
    }

    uint64_t seed() const { return seed_; }

private:
    uint64_t seed_;
    uint64_t counter_ = 0;
};

// Haar-distributed unitary: QR of a complex Gaussian matrix via modified
// Gram-Schmidt, with the R diagonal phase-normalised.
inline Matrix haar_unitary(int n, CounterRng& rng) {
    std::vector<std::vector<cplx>> cols(static_cast<size_t>(n), std::vector<cplx>(static_cast<size_t>(n)));
    for (auto& col : cols)
        for (auto& v : col) v = rng.complex_gaussian();

    for (size_t j = 0; j < cols.size(); ++j) {
        for (size_t i = 0; i < j; ++i) {
            cplx proj = 0.0;
            for (size_t r = 0; r < cols[j].size(); ++r) proj += std::conj(cols[i][r]) * cols[j][r];
            for (size_t r = 0; r < cols[j].size(); ++r) cols[j][r] -= proj * cols[i][r];
        }
        double nrm = 0.0;
        for (const cplx& v : cols[j]) nrm += std::norm(v);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) {  // essentially impossible; restart the column
            for (auto& v : cols[j]) v = rng.complex_gaussian();
            --j;
            continue;
        }
        for (auto& v : cols[j]) v /= nrm;
    }

    Matrix u(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) u(i, j) = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return u;
}

// Random shape with total explicit dimension in [1, max_total_dim], weights
// drawn from {0.5, 1, 2}; optionally an infinite-weight diffuse tail block
// (which generators always populate with the zero matrix).
inline AlgebraShape random_shape(CounterRng& rng, int max_total_dim, bool allow_infinite_tail = false,
                                 bool diffuse = false) {
    static const double kWeights[] = {0.5, 1.0, 2.0};
    AlgebraShape shape;
    int remaining = 1 + rng.uniform_int(max_total_dim);
    while (remaining > 0) {
        const int n = 1 + rng.uniform_int(remaining);
        shape.blocks.push_back(BlockSpec{n, kWeights[rng.uniform_int(3)], diffuse});
        remaining -= n;
    }
    if (allow_infinite_tail && rng.uniform() < 0.3)
        shape.blocks.push_back(BlockSpec{1, kInf, true});
    return shape;
}

// Positive operator with exponentially distributed spectrum (rejected above
// `cap` to keep functional calculus well conditioned) conjugated by a Haar
// unitary per block. Infinite-weight blocks stay zero so the result is
// tau-compact and trace class.
inline BlockOperator random_positive(const AlgebraShape& shape, CounterRng& rng, double cap = 2.0,
                                     double mean = 0.7) {
    std::vector<Matrix> blocks;
    for (const auto& spec : shape.blocks) {
        if (is_inf(spec.weight)) {
            blocks.push_back(Matrix::zero(spec.n));
            continue;
        }
        std::vector<double> lam(static_cast<size_t>(spec.n));
        for (auto& l : lam) {
            do l = rng.exponential(mean);
            while (l > cap);
        }
        const Matrix u = haar_unitary(spec.n, rng);
        Matrix d = Matrix::diagonal(lam);
        blocks.push_back(u * d * u.adjoint());
    }
    return BlockOperator(shape, std::move(blocks));
}

// General (non-Hermitian) operator with complex Gaussian entries, scaled to
// uniform norm about `norm_cap`; infinite-weight blocks stay zero.
inline BlockOperator random_operator(const AlgebraShape& shape, CounterRng& rng, double norm_cap = 1.5) {
    std::vector<Matrix> blocks;
    for (const auto& spec : shape.blocks) {
        if (is_inf(spec.weight)) {
            blocks.push_back(Matrix::zero(spec.n));
            continue;
        }
        Matrix m(spec.n);
        for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.n; ++j) m(i, j) = rng.complex_gaussian();
        blocks.push_back(m);
    }
    BlockOperator x(shape, std::move(blocks));
    const double nrm = uniform_norm(x);
    return nrm > 0.0 ? (cplx(norm_cap / nrm) * x) : x;
}

// Contraction: random operator rescaled strictly inside the unit ball.
inline BlockOperator random_contraction(const AlgebraShape& shape, CounterRng& rng) {
    return random_operator(shape, rng, 0.9);
}

// Blockwise Haar-rotated coordinate projection with tau(p) <= max_trace.
// Ranks are chosen greedily at random among the finite-weight blocks.
inline Projection random_projection_with_trace_at_most(const AlgebraShape& shape, double max_trace,
                                                       CounterRng& rng) {
    std::vector<Matrix> blocks;
    double budget = max_trace;
    for (const auto& spec : shape.blocks) {
        int rank = 0;
        if (!is_inf(spec.weight) && spec.weight <= budget) {
            const int max_rank = std::min(spec.n, static_cast<int>(budget / spec.weight));
            rank = rng.uniform_int(max_rank + 1);
            budget -= rank * spec.weight;
        }
        if (rank == 0) {
            blocks.push_back(Matrix::zero(spec.n));
            continue;
        }
        const Matrix u = haar_unitary(spec.n, rng);
        std::vector<double> ind(static_cast<size_t>(spec.n), 0.0);
        for (int i = 0; i < rank; ++i) ind[static_cast<size_t>(i)] = 1.0;
        Matrix d = Matrix::diagonal(ind);
        blocks.push_back(u * d * u.adjoint());
    }
    return Projection(BlockOperator(shape, std::move(blocks)));
}

// sup{tau(xp) : tau(p) <= t} for positive x on small shapes: the exhaustive
// spectral knapsack plus `trials` random projections of admissible trace,
// which can only approach the spectral optimum from below.
inline double ky_fan_sup_oracle(const BlockOperator& x, double t, int trials = 20, uint64_t seed = 0) {
    if (!(t > 0.0)) throw DomainError("ky_fan_sup_oracle requires t > 0");
    if (!is_positive(x)) throw NotPositiveError("ky_fan_sup_oracle requires x >= 0");
    if (x.shape().total_dim() > 8)
        throw OracleSizeError("ky_fan_sup_oracle: exhaustive search refused beyond total dimension 8");

    double best = detail::spectral_subset_sup(x, t);
    CounterRng rng(seed);
    for (int i = 0; i < trials; ++i) {
        const Projection p = random_projection_with_trace_at_most(x.shape(), t, rng);
        best = std::max(best, trace(x * p.op()).real());
    }
    return best;
}

}  // namespace snumlab
