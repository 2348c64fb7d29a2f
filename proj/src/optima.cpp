#include "ttopt/optima.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ttopt/errors.hpp"

namespace ttopt {

namespace {

// Divides `m` by its largest |entry| and returns log of that factor
// (-inf for an all-zero matrix, which is left as is).
double normalize_max(Eigen::Ref<RowMatrix> m) {
    const double s = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    if (s == 0.0) return -std::numeric_limits<double>::infinity();
    m /= s;
    return std::log(s);
}

std::vector<double> squared_row_norms(const Eigen::Ref<const RowMatrix>& m) {
    std::vector<double> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) out[static_cast<std::size_t>(r)] = m.row(r).squaredNorm();
    return out;
}

RowMatrix gather_rows(const Eigen::Ref<const RowMatrix>& m, const std::vector<std::size_t>& rows) {
    RowMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t k = 0; k < rows.size(); ++k)
        out.row(static_cast<Eigen::Index>(k)) = m.row(static_cast<Eigen::Index>(rows[k]));
    return out;
}

}  // namespace

std::vector<std::size_t> top_k_by_norm(std::span<const double> squared_norms, std::size_t k) {
    std::vector<std::size_t> order(squared_norms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t take = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (squared_norms[a] != squared_norms[b])
                              return squared_norms[a] > squared_norms[b];
                          return a < b;
                      });
    order.resize(take);
    return order;
}

std::vector<std::size_t> top_k(const RowMatrix& m, std::size_t k) {
    if (k == 0) throw std::domain_error("top_k: k must be >= 1");
    if (m.rows() == 0) throw std::domain_error("top_k: matrix has no rows");
    RowMatrix scaled = m;
    normalize_max(scaled);
    return top_k_by_norm(squared_row_norms(scaled), k);
}

MultiIndex CandidateSet::row(std::size_t k) const {
    const auto first = indices.begin() + static_cast<std::ptrdiff_t>(k * width);
    return MultiIndex(std::vector<std::size_t>(first, first + static_cast<std::ptrdiff_t>(width)));
}

MultiIndex BeamStep::candidate_index(std::size_t r) const {
    if (parents == nullptr) return MultiIndex({r});
    const std::size_t n = static_cast<std::size_t>(candidates.rows()) / parents->rows();
    MultiIndex idx = parents->row(r / n);
    idx.push_back(r % n);
    return idx;
}

MaxSearch optima_tt_max(const TTTensor& t, std::size_t beam_width, const BeamObserver& observer) {
    if (beam_width == 0) throw std::domain_error("optima_tt_max: beam width K must be >= 1");
    double removed = 0.0;
    const TTTensor orth = t.dim() > 1 ? tt_orth_direction(t, RankPolicy::reduce, &removed) : t;

    CandidateSet beam;
    {
        RowMatrix cand = orth.core(0).column_unfolding();
        const double log_scale = removed + normalize_max(cand);
        const auto selected = top_k_by_norm(squared_row_norms(cand), beam_width);
        if (observer) observer(BeamStep{0, cand, log_scale, nullptr, selected});
        beam.prefix = gather_rows(cand, selected);
        beam.log_scale = log_scale;
        beam.width = 1;
        beam.indices = selected;
    }

    for (std::size_t i = 1; i < orth.dim(); ++i) {
        const auto& core = orth.core(i);
        const auto n_size = core.mode_size();
        const auto r_next = static_cast<Eigen::Index>(core.right_rank());
        // (K x N*R) product read as (K*N x R): row parent*N + n extends the
        // parent prefix with index n.
        RowMatrix product = beam.prefix * core.row_unfolding();
        RowMatrix cand = RowMatrixMap(product.data(), product.size() / r_next, r_next);
        const double log_scale = beam.log_scale + normalize_max(cand);
        const auto selected = top_k_by_norm(squared_row_norms(cand), beam_width);
        if (observer) observer(BeamStep{i, cand, log_scale, &beam, selected});

        CandidateSet next;
        next.prefix = gather_rows(cand, selected);
        next.log_scale = log_scale;
        next.width = beam.width + 1;
        next.indices.reserve(selected.size() * next.width);
        for (auto r : selected) {
            const std::size_t parent = r / n_size;
            const auto first = beam.indices.begin() + static_cast<std::ptrdiff_t>(parent * beam.width);
            next.indices.insert(next.indices.end(), first, first + static_cast<std::ptrdiff_t>(beam.width));
            next.indices.push_back(r % n_size);
        }
        beam = std::move(next);
    }

    MultiIndex best = beam.row(0);
    return MaxSearch{std::move(best), std::move(beam)};
}

std::string_view to_string(PassDirection d) {
    switch (d) {
        case PassDirection::forward: return "forward";
        case PassDirection::backward: return "backward";
        case PassDirection::best_of_both: return "best-of-both";
    }
    return "unknown";
}

BidirResult optima_tt_max_bidir_detailed(const TTTensor& t, std::size_t beam_width) {
    MultiIndex fwd = optima_tt_max(t, beam_width).index;
    MultiIndex bwd = reversed(optima_tt_max(reversed(t), beam_width).index);
    if (std::abs(eval(t, bwd)) > std::abs(eval(t, fwd)))
        return {std::move(bwd), PassDirection::backward};
    return {std::move(fwd), PassDirection::forward};
}

MultiIndex optima_tt_max_bidir(const TTTensor& t, std::size_t beam_width) {
    return optima_tt_max_bidir_detailed(t, beam_width).index;
}

OptimaResult optima_tt(const TTTensor& t, std::size_t beam_width) {
    return optima_tt(t, OptimaOptions{.beam_width = beam_width});
}

OptimaResult optima_tt(const TTTensor& t, const OptimaOptions& options) {
    auto search = [&](const TTTensor& x) {
        return options.bidirectional ? optima_tt_max_bidir(x, options.beam_width)
                                     : optima_tt_max(x, options.beam_width).index;
    };
    MultiIndex i_abs_max = search(t);
    const double y_abs_max = eval(t, i_abs_max);
    TTTensor shifted = tt_dif(t, tt_const(t.shape(), y_abs_max));
    if (options.square_shift) shifted = tt_square(shifted);
    MultiIndex i_other = search(shifted);
    const double y_other = eval(t, i_other);

    OptimaResult res;
    res.k_used = options.beam_width;
    res.direction = options.bidirectional ? PassDirection::best_of_both : PassDirection::forward;
    if (y_abs_max >= y_other) {
        res.i_min = std::move(i_other);
        res.y_min = y_other;
        res.i_max = std::move(i_abs_max);
        res.y_max = y_abs_max;
    } else {
        res.i_min = std::move(i_abs_max);
        res.y_min = y_abs_max;
        res.i_max = std::move(i_other);
        res.y_max = y_other;
    }
    return res;
}

TTTensor join_first_indices(const TTTensor& t, std::size_t j, std::size_t budget) {
    if (j < 1 || j >= t.dim())
        throw std::domain_error("join_first_indices: need 1 <= j < d (j = " + std::to_string(j) +
                                ", d = " + std::to_string(t.dim()) + ")");
    if (j == 1) return t;
    const Shape shape = t.shape();
    const std::size_t merged = checked_element_count(std::span(shape).first(j), budget);
    const std::size_t r_out = t.core(j - 1).right_rank();
    if (r_out > budget / merged)
        throw ResourceError("join_first_indices: merged first core exceeds element budget");

    // Rows of `acc` are merged positions of the modes joined so far.
    RowMatrix acc = t.core(0).column_unfolding();
    for (std::size_t i = 1; i < j; ++i) {
        const auto& core = t.core(i);
        RowMatrix next(acc.rows() * static_cast<Eigen::Index>(core.mode_size()),
                       static_cast<Eigen::Index>(core.right_rank()));
        for (std::size_t n = 0; n < core.mode_size(); ++n)
            next.middleRows(static_cast<Eigen::Index>(n) * acc.rows(), acc.rows()) = acc * core.slice(n);
        acc = std::move(next);
    }
    std::vector<TTCore> cores;
    cores.emplace_back(1, merged, r_out, std::vector<double>(acc.data(), acc.data() + acc.size()));
    for (std::size_t i = j; i < t.dim(); ++i) cores.push_back(t.core(i));
    return TTTensor(std::move(cores));
}

MultiIndex split_joined_index(const MultiIndex& joined, std::span<const std::size_t> shape,
                              std::size_t j) {
    if (j < 1 || j > shape.size() || joined.size() + j - 1 != shape.size())
        throw std::domain_error("split_joined_index: index does not match joined shape");
    std::vector<std::size_t> out;
    out.reserve(shape.size());
    std::size_t flat = joined[0];
    for (std::size_t i = 0; i < j; ++i) {
        out.push_back(flat % shape[i]);
        flat /= shape[i];
    }
    if (flat != 0) throw std::domain_error("split_joined_index: merged position out of range");
    for (std::size_t i = 1; i < joined.size(); ++i) out.push_back(joined[i]);
    MultiIndex idx(std::move(out));
    check_index(idx, shape);
    return idx;
}

MultiIndex join_index(const MultiIndex& idx, std::span<const std::size_t> shape, std::size_t j) {
    check_index(idx, shape);
    if (j < 1 || j > shape.size()) throw std::domain_error("join_index: bad j");
    std::size_t flat = 0;
    for (std::size_t i = j; i-- > 0;) flat = flat * shape[i] + idx[i];
    std::vector<std::size_t> out{flat};
    for (std::size_t i = j; i < shape.size(); ++i) out.push_back(idx[i]);
    return MultiIndex(std::move(out));
}

}  // namespace ttopt
