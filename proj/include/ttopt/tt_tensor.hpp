#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ttopt/dense.hpp"
#include "ttopt/multi_index.hpp"

namespace ttopt {

using Shape = std::vector<std::size_t>;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixMap = Eigen::Map<RowMatrix>;
using ConstRowMatrixMap = Eigen::Map<const RowMatrix>;
using ConstSliceMap = Eigen::Map<const RowMatrix, 0, Eigen::OuterStride<>>;

/// Three-way TT-core of shape (R_prev, N, R_next).
///
/// Storage is row-major with R_prev outermost and R_next innermost, so
/// element (a, n, b) lives at (a * N + n) * R_next + b. Both the row
/// unfolding (R_prev x N*R_next) and the column unfolding
/// (R_prev*N x R_next) are zero-copy views of the same buffer.
class TTCore {
public:
    TTCore() = default;
    /// Zero-filled core.
    TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank);
    TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank,
           std::vector<double> data);

    [[nodiscard]] std::size_t left_rank() const noexcept { return r_prev_; }
    [[nodiscard]] std::size_t mode_size() const noexcept { return n_; }
    [[nodiscard]] std::size_t right_rank() const noexcept { return r_next_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    double operator()(std::size_t a, std::size_t n, std::size_t b) const {
        return data_[(a * n_ + n) * r_next_ + b];
    }
    double& operator()(std::size_t a, std::size_t n, std::size_t b) {
        return data_[(a * n_ + n) * r_next_ + b];
    }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }

    [[nodiscard]] ConstRowMatrixMap row_unfolding() const;
    [[nodiscard]] RowMatrixMap row_unfolding();
    [[nodiscard]] ConstRowMatrixMap column_unfolding() const;
    [[nodiscard]] RowMatrixMap column_unfolding();
    /// The matrix G[:, n, :] of shape (R_prev, R_next).
    [[nodiscard]] ConstSliceMap slice(std::size_t n) const;

    friend bool operator==(const TTCore&, const TTCore&) = default;

private:
    std::size_t r_prev_ = 0;
    std::size_t n_ = 0;
    std::size_t r_next_ = 0;
    std::vector<double> data_;
};

/// A d-dimensional array in tensor-train format.
///
/// Invariants (checked on construction, std::domain_error otherwise): d >= 1,
/// every core dimension >= 1, all entries finite, boundary ranks equal 1 and
/// consecutive ranks chain.
class TTTensor {
public:
    explicit TTTensor(std::vector<TTCore> cores);

    [[nodiscard]] std::size_t dim() const noexcept { return cores_.size(); }
    [[nodiscard]] Shape shape() const;
    /// The d+1 TT-ranks R_0..R_d (R_0 = R_d = 1).
    [[nodiscard]] std::vector<std::size_t> ranks() const;
    /// Arithmetic mean of the interior ranks R_1..R_{d-1} (1 when d == 1).
    [[nodiscard]] double average_rank() const;
    [[nodiscard]] const TTCore& core(std::size_t i) const { return cores_[i]; }
    [[nodiscard]] std::span<const TTCore> cores() const noexcept { return cores_; }

    friend bool operator==(const TTTensor&, const TTTensor&) = default;

private:
    std::vector<TTCore> cores_;
};

/// Element at `idx`, computed as a left-to-right chain of vector-matrix
/// products. Throws std::domain_error when the index does not fit.
double eval(const TTTensor& t, const MultiIndex& idx);

/// Rank-1 tensor whose elements all equal `v`.
TTTensor tt_const(const Shape& shape, double v);

/// Element-wise sum; interior ranks add.
TTTensor tt_add(const TTTensor& a, const TTTensor& b);

/// Element-wise difference a - b.
TTTensor tt_dif(const TTTensor& a, const TTTensor& b);

/// Elementwise square t * t. Ranks become R_i^2.
TTTensor tt_square(const TTTensor& t);

/// What tt_orth does with a core whose left rank exceeds N_i * R_i.
enum class RankPolicy {
    /// Throw std::domain_error naming the (one-based) core.
    reject,
    /// Shrink that rank to N_i * R_i; the dropped directions carry no
    /// information, so element values are unchanged.
    reduce,
};

/// Right-to-left orthogonalization sweep. Returns a new tensor with the same
/// elements whose cores 2..d satisfy sum_j G[:,j,:] G[:,j,:]^T = I.
///
/// Under RankPolicy::reject every core i >= 2 must have R_{i-1} <= N_i * R_i.
TTTensor tt_orth(const TTTensor& t, RankPolicy policy = RankPolicy::reject);

/// tt_orth up to a positive factor: the leading core is renormalized after
/// every step, so long trains whose norm overflows a double stay finite.
/// Orderings by |value| and normalized marginals are unchanged. The natural
/// log of the factor divided out is written to `log_factor` when given.
TTTensor tt_orth_direction(const TTTensor& t, RankPolicy policy = RankPolicy::reject,
                           double* log_factor = nullptr);

/// Frobenius norm of sum_j G[:,j,:] G[:,j,:]^T - I for one core.
double gram_residual(const TTCore& core);

/// Largest gram_residual over cores 2..d (0 when d == 1).
double max_gram_residual(const TTTensor& t);

/// Cores filled with i.i.d. standard normal draws. `ranks` holds the d-1
/// interior ranks. The generator is std::mt19937_64 seeded with `seed`,
/// consumed core by core in storage order through std::normal_distribution.
TTTensor tt_random(const Shape& shape, std::span<const std::size_t> ranks, std::uint64_t seed);

/// Dense copy of the tensor. Throws ResourceError if the element count
/// exceeds `budget`.
DenseArray to_full(const TTTensor& t, std::size_t budget = kDefaultElementBudget);

/// Largest |element|, found by visiting every element. The train is split
/// into two halves that are contracted separately (each half must fit
/// `budget`); their product is formed block by block, so the full array is
/// never stored.
double max_abs_scan(const TTTensor& t, std::size_t budget = kDefaultElementBudget);

/// Same elements with the mode order reversed: result[n_d, ..., n_1] = t[n_1, ..., n_d].
TTTensor reversed(const TTTensor& t);

/// Reverses the entries of a multi-index (maps between `t` and `reversed(t)`).
MultiIndex reversed(const MultiIndex& idx);

}  // namespace ttopt
