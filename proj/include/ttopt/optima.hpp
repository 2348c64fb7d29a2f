#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "ttopt/dense.hpp"
#include "ttopt/multi_index.hpp"
#include "ttopt/tt_tensor.hpp"

namespace ttopt {

/// Beam width used by the experiments unless configured otherwise.
inline constexpr std::size_t kDefaultBeamWidth = 100;

/// Row numbers of the min(k, rows) rows of largest Euclidean norm, in
/// descending order of norm. Equal norms keep the lower row number first.
std::vector<std::size_t> top_k(const RowMatrix& m, std::size_t k);

/// Same selection on precomputed squared row norms.
std::vector<std::size_t> top_k_by_norm(std::span<const double> squared_norms, std::size_t k);

/// Beam state after fixing the first `width` modes.
///
/// `prefix` holds one chain product G_1[1,n_1,:] ... G_i[:,n_i,:] per row,
/// stored divided by exp(log_scale) so that long trains neither overflow nor
/// underflow. `indices` is row-major (rows x width), zero-based.
struct CandidateSet {
    RowMatrix prefix;
    double log_scale = 0.0;
    std::size_t width = 0;
    std::vector<std::size_t> indices;

    [[nodiscard]] std::size_t rows() const { return static_cast<std::size_t>(prefix.rows()); }
    [[nodiscard]] MultiIndex row(std::size_t k) const;
};

struct MaxSearch {
    /// Approximate position of the largest |element|.
    MultiIndex index;
    /// Final beam: the approximate top-K elements by modulus, best first.
    CandidateSet beam;
};

/// One expansion step of the beam, handed to a BeamObserver before pruning.
struct BeamStep {
    std::size_t mode;  // zero-based mode just expanded
    /// Candidate rows (parent-major: row = parent * N + n), scaled by
    /// exp(log_scale); shape (rows x R_mode).
    const RowMatrix& candidates;
    double log_scale;
    /// Beam the candidates were expanded from; nullptr on the first mode.
    const CandidateSet* parents;
    /// Rows kept for the next step.
    const std::vector<std::size_t>& selected;

    /// Partial multi-index (modes 0..mode) of candidate row `r`.
    [[nodiscard]] MultiIndex candidate_index(std::size_t r) const;
};

using BeamObserver = std::function<void(const BeamStep&)>;

/// Beam search for the element of largest modulus: orthogonalize a copy,
/// then sweep left to right keeping the K prefixes of largest norm.
/// Throws std::domain_error for K == 0 and propagates tt_orth failures.
MaxSearch optima_tt_max(const TTTensor& t, std::size_t beam_width,
                        const BeamObserver& observer = {});

enum class PassDirection { forward, backward, best_of_both };

std::string_view to_string(PassDirection d);

struct OptimaResult {
    MultiIndex i_min;
    double y_min = 0.0;
    MultiIndex i_max;
    double y_max = 0.0;
    std::size_t k_used = 0;
    PassDirection direction = PassDirection::forward;
};

struct OptimaOptions {
    std::size_t beam_width = kDefaultBeamWidth;
    /// Run every max-modulus search from both ends of the train and keep the
    /// better candidate.
    bool bidirectional = false;
    /// Search the square of t - y_{|max|} instead of the plain difference.
    /// The argmax is the same; squaring sharpens the marginals the beam
    /// ranks by, at the price of rank (R+1)^2.
    bool square_shift = false;
};

/// Approximate minimum and maximum elements: one max-modulus search on `t`,
/// a second on t - y_{|max|}, then the two values ordered.
OptimaResult optima_tt(const TTTensor& t, std::size_t beam_width);
OptimaResult optima_tt(const TTTensor& t, const OptimaOptions& options);

struct BidirResult {
    MultiIndex index;
    PassDirection winner;  // forward on ties
};

/// Max-modulus search run from both ends; returns the better candidate.
BidirResult optima_tt_max_bidir_detailed(const TTTensor& t, std::size_t beam_width);
MultiIndex optima_tt_max_bidir(const TTTensor& t, std::size_t beam_width);

/// Merges modes 1..j into a single mode of size N_1 * ... * N_j. The merged
/// position is little-endian: flat = n_1 + N_1 * (n_2 + N_2 * (n_3 + ...)),
/// zero-based. j == 1 returns the tensor unchanged.
///
/// Throws std::domain_error unless 1 <= j < d, and ResourceError when the
/// merged first core would exceed `budget` elements.
TTTensor join_first_indices(const TTTensor& t, std::size_t j,
                            std::size_t budget = kDefaultElementBudget);

/// Maps an index of join_first_indices(t, j) back to an index of t.
MultiIndex split_joined_index(const MultiIndex& joined, std::span<const std::size_t> shape,
                              std::size_t j);

/// Maps an index of t to the corresponding index of join_first_indices(t, j).
MultiIndex join_index(const MultiIndex& idx, std::span<const std::size_t> shape, std::size_t j);

}  // namespace ttopt
