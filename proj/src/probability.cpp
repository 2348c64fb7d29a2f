#include "ttopt/probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "ttopt/optima.hpp"
#include "ttopt/oracle.hpp"

namespace ttopt {

namespace {

// Squared norms of v * G[:, n, :] for every n, where v is a row vector.
std::vector<double> branch_masses(const Eigen::RowVectorXd& v, const TTCore& core,
                                  RowMatrix& branches) {
    const RowMatrix product = v * core.row_unfolding();
    branches = ConstRowMatrixMap(product.data(),
                                 static_cast<Eigen::Index>(core.mode_size()),
                                 static_cast<Eigen::Index>(core.right_rank()));
    std::vector<double> masses(core.mode_size());
    for (std::size_t n = 0; n < masses.size(); ++n)
        masses[n] = branches.row(static_cast<Eigen::Index>(n)).squaredNorm();
    return masses;
}

}  // namespace

MarginalTable prefix_marginal(const TTTensor& t, const MultiIndex& partial, Orthogonality mode) {
    if (partial.size() >= t.dim())
        throw std::domain_error("prefix_marginal: partial index must be shorter than d");
    const Shape shape = t.shape();
    for (std::size_t i = 0; i < partial.size(); ++i)
        if (partial[i] >= shape[i]) throw std::domain_error("prefix_marginal: prefix entry out of range");

    const TTTensor* tensor = &t;
    TTTensor orth = t;
    if (mode == Orthogonality::orthogonalize) {
        orth = tt_orth(t, RankPolicy::reduce);
        tensor = &orth;
    } else if (const double res = max_gram_residual(t); res > kOrthogonalityTolerance) {
        throw std::domain_error("prefix_marginal: tensor is not right-orthogonal (Gram residual " +
                                std::to_string(res) + ")");
    }

    // Prefix kept at unit max-entry; the scale is restored in `mass`.
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
    double log_scale = 0.0;
    for (std::size_t i = 0; i < partial.size(); ++i) {
        v = v * tensor->core(i).slice(partial[i]);
        const double s = v.cwiseAbs().maxCoeff();
        if (s == 0.0) throw std::domain_error("prefix_marginal: prefix has zero mass");
        v /= s;
        log_scale += std::log(s);
    }
    RowMatrix branches;
    auto masses = branch_masses(v, tensor->core(partial.size()), branches);
    double total = 0.0;
    for (double m : masses) total += m;
    if (total == 0.0) throw std::domain_error("prefix_marginal: prefix has zero mass");

    MarginalTable table;
    table.probs.resize(masses.size());
    for (std::size_t n = 0; n < masses.size(); ++n) table.probs[n] = masses[n] / total;
    table.conditioning = partial;
    table.mass = total * std::exp(2.0 * log_scale);
    return table;
}

std::vector<MultiIndex> sample(const TTTensor& t, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw std::domain_error("sample: count must be >= 1");
    const TTTensor orth = t.dim() > 1 ? tt_orth(t, RankPolicy::reduce) : t;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<MultiIndex> out;
    out.reserve(count);
    RowMatrix branches;
    for (std::size_t s = 0; s < count; ++s) {
        Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
        std::vector<std::size_t> idx(orth.dim());
        for (std::size_t i = 0; i < orth.dim(); ++i) {
            const auto masses = branch_masses(v, orth.core(i), branches);
            double total = 0.0;
            for (double m : masses) total += m;
            if (total == 0.0)
                throw std::domain_error(i == 0 ? "sample: tensor is identically zero"
                                               : "sample: reached a prefix with zero mass");
            const double u = unit(gen) * total;
            std::size_t pick = masses.size() - 1;
            double cum = 0.0;
            for (std::size_t n = 0; n < masses.size(); ++n) {
                cum += masses[n];
                if (u < cum && masses[n] > 0.0) {
                    pick = n;
                    break;
                }
            }
            while (masses[pick] == 0.0) --pick;  // rounding fell past the end
            idx[i] = pick;
            v = branches.row(static_cast<Eigen::Index>(pick));
            v /= v.cwiseAbs().maxCoeff();
        }
        out.emplace_back(std::move(idx));
    }
    return out;
}

BeamMarginalReport beam_marginal_check(const TTTensor& t, std::size_t beam_width) {
    const DenseArray full = to_full(t);
    const double total = oracle::brute_prefix_mass(full, MultiIndex{});
    BeamMarginalReport report;
    optima_tt_max(t, beam_width, [&](const BeamStep& step) {
        ++report.steps;
        const double factor = std::exp(2.0 * step.log_scale);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (Eigen::Index r = 0; r < step.candidates.rows(); ++r) {
            const double norm2 = step.candidates.row(r).squaredNorm() * factor;
            const double brute =
                oracle::brute_prefix_mass(full, step.candidate_index(static_cast<std::size_t>(r)));
            const double diff = std::abs(norm2 - brute);
            report.max_abs_discrepancy = std::max(report.max_abs_discrepancy, diff);
            if (total > 0.0) report.max_rel_discrepancy = std::max(report.max_rel_discrepancy, diff / total);
            lo = std::min(lo, norm2);
            hi = std::max(hi, norm2);
            ++report.rows_checked;
        }
        if (hi > 0.0) report.max_norm_spread = std::max(report.max_norm_spread, (hi - lo) / hi);
    });
    return report;
}

}  // namespace ttopt
