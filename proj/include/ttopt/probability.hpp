#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ttopt/multi_index.hpp"
#include "ttopt/tt_tensor.hpp"

namespace ttopt {

/// Gram residual above which a tensor is not treated as right-orthogonal.
inline constexpr double kOrthogonalityTolerance = 1e-8;

/// Conditional distribution of one mode under p = C * Y^2, given a prefix.
struct MarginalTable {
    std::vector<double> probs;
    MultiIndex conditioning;
    /// Unnormalized mass C' = sum over the table before normalization.
    double mass = 0.0;
};

enum class Orthogonality {
    /// Require cores 2..d to be right-orthogonal already (domain error if not).
    verify,
    /// Orthogonalize an internal copy first.
    orthogonalize,
};

/// Marginal of mode `partial.size()` given the leading indices `partial`,
/// read off as squared norms of prefix chain products. Throws
/// std::domain_error on a non-orthogonal input under `verify` and on a
/// prefix with zero mass.
MarginalTable prefix_marginal(const TTTensor& t, const MultiIndex& partial,
                              Orthogonality mode = Orthogonality::verify);

/// `count` i.i.d. multi-indices drawn from p(idx) = Y[idx]^2 / C by
/// sequential conditional sampling. Uses std::mt19937_64(seed) with
/// std::uniform_real_distribution, one draw per mode.
std::vector<MultiIndex> sample(const TTTensor& t, std::size_t count, std::uint64_t seed);

struct BeamMarginalReport {
    /// max |squared prefix norm - brute-force trailing mass| over all steps
    /// and candidate rows.
    double max_abs_discrepancy = 0.0;
    /// Same, divided by the total mass C = sum Y^2.
    double max_rel_discrepancy = 0.0;
    /// max over steps of (max - min) / max of the candidates' squared norms.
    double max_norm_spread = 0.0;
    std::size_t rows_checked = 0;
    std::size_t steps = 0;
};

/// Replays the max-modulus beam search and compares, for every candidate
/// row at every step, its squared prefix norm with the brute-force sum of
/// Y^2 over the trailing modes. Densifies `t`.
BeamMarginalReport beam_marginal_check(const TTTensor& t, std::size_t beam_width);

}  // namespace ttopt
