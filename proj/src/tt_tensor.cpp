#include "ttopt/tt_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

#include "ttopt/errors.hpp"

namespace ttopt {

TTCore::TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank)
    : r_prev_(left_rank), n_(mode_size), r_next_(right_rank),
      data_(left_rank * mode_size * right_rank, 0.0) {
    if (left_rank == 0 || mode_size == 0 || right_rank == 0)
        throw std::domain_error("TT-core dimensions must all be >= 1");
}

TTCore::TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank,
               std::vector<double> data)
    : r_prev_(left_rank), n_(mode_size), r_next_(right_rank), data_(std::move(data)) {
    if (left_rank == 0 || mode_size == 0 || right_rank == 0)
        throw std::domain_error("TT-core dimensions must all be >= 1");
    if (data_.size() != left_rank * mode_size * right_rank)
        throw std::domain_error("TT-core data size does not match its shape");
}

ConstRowMatrixMap TTCore::row_unfolding() const {
    return {data_.data(), static_cast<Eigen::Index>(r_prev_),
            static_cast<Eigen::Index>(n_ * r_next_)};
}
RowMatrixMap TTCore::row_unfolding() {
    return {data_.data(), static_cast<Eigen::Index>(r_prev_),
            static_cast<Eigen::Index>(n_ * r_next_)};
}
ConstRowMatrixMap TTCore::column_unfolding() const {
    return {data_.data(), static_cast<Eigen::Index>(r_prev_ * n_),
            static_cast<Eigen::Index>(r_next_)};
}
RowMatrixMap TTCore::column_unfolding() {
    return {data_.data(), static_cast<Eigen::Index>(r_prev_ * n_),
            static_cast<Eigen::Index>(r_next_)};
}
ConstSliceMap TTCore::slice(std::size_t n) const {
    return {data_.data() + n * r_next_, static_cast<Eigen::Index>(r_prev_),
            static_cast<Eigen::Index>(r_next_),
            Eigen::OuterStride<>(static_cast<Eigen::Index>(n_ * r_next_))};
}

TTTensor::TTTensor(std::vector<TTCore> cores) : cores_(std::move(cores)) {
    if (cores_.empty()) throw std::domain_error("TT-tensor needs at least one core");
    for (std::size_t i = 0; i < cores_.size(); ++i) {
        const auto& c = cores_[i];
        const auto where = "core " + std::to_string(i + 1);
        if (c.left_rank() == 0 || c.mode_size() == 0 || c.right_rank() == 0)
            throw std::domain_error(where + ": dimensions must be >= 1");
        if (i == 0 && c.left_rank() != 1)
            throw std::domain_error(where + ": first core must have left rank 1");
        if (i + 1 == cores_.size() && c.right_rank() != 1)
            throw std::domain_error(where + ": last core must have right rank 1");
        if (i > 0 && cores_[i - 1].right_rank() != c.left_rank())
            throw std::domain_error(where + ": left rank " + std::to_string(c.left_rank()) +
                                    " does not match previous right rank " +
                                    std::to_string(cores_[i - 1].right_rank()));
        for (double v : c.data())
            if (!std::isfinite(v)) throw std::domain_error(where + ": non-finite entry");
    }
}

Shape TTTensor::shape() const {
    Shape s;
    s.reserve(cores_.size());
    for (const auto& c : cores_) s.push_back(c.mode_size());
    return s;
}

std::vector<std::size_t> TTTensor::ranks() const {
    std::vector<std::size_t> r{1};
    for (const auto& c : cores_) r.push_back(c.right_rank());
    return r;
}

double TTTensor::average_rank() const {
    if (cores_.size() == 1) return 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cores_.size(); ++i)
        sum += static_cast<double>(cores_[i].right_rank());
    return sum / static_cast<double>(cores_.size() - 1);
}

double eval(const TTTensor& t, const MultiIndex& idx) {
    check_index(idx, t.shape());
    Eigen::RowVectorXd v = t.core(0).slice(idx[0]);
    for (std::size_t i = 1; i < t.dim(); ++i) v = v * t.core(i).slice(idx[i]);
    return v(0);
}

TTTensor tt_const(const Shape& shape, double v) {
    if (shape.empty()) throw std::domain_error("shape must have at least one mode");
    const auto d = static_cast<double>(shape.size());
    const double root = std::pow(std::abs(v), 1.0 / d);
    std::vector<TTCore> cores;
    cores.reserve(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (shape[i] == 0) throw std::domain_error("mode sizes must be >= 1");
        double fill = root;
        if (i + 1 == shape.size() && v < 0) fill = -root;
        cores.emplace_back(1, shape[i], 1, std::vector<double>(shape[i], fill));
    }
    return TTTensor(std::move(cores));
}

namespace {

TTTensor block_sum(const TTTensor& a, const TTTensor& b, double sign_b) {
    if (a.shape() != b.shape()) throw std::domain_error("tensors have different mode sizes");
    const std::size_t d = a.dim();
    std::vector<TTCore> cores;
    cores.reserve(d);
    if (d == 1) {
        const auto& ca = a.core(0);
        const auto& cb = b.core(0);
        TTCore c(1, ca.mode_size(), 1);
        for (std::size_t n = 0; n < ca.mode_size(); ++n)
            c(0, n, 0) = ca(0, n, 0) + sign_b * cb(0, n, 0);
        cores.push_back(std::move(c));
        return TTTensor(std::move(cores));
    }
    for (std::size_t i = 0; i < d; ++i) {
        const auto& ca = a.core(i);
        const auto& cb = b.core(i);
        const std::size_t n_size = ca.mode_size();
        const bool first = i == 0;
        const bool last = i + 1 == d;
        const std::size_t rp = first ? 1 : ca.left_rank() + cb.left_rank();
        const std::size_t rn = last ? 1 : ca.right_rank() + cb.right_rank();
        // Offsets of b's block inside the combined core.
        const std::size_t off_p = first ? 0 : ca.left_rank();
        const std::size_t off_n = last ? 0 : ca.right_rank();
        const double scale_b = last ? sign_b : 1.0;
        TTCore c(rp, n_size, rn);
        for (std::size_t x = 0; x < ca.left_rank(); ++x)
            for (std::size_t n = 0; n < n_size; ++n)
                for (std::size_t y = 0; y < ca.right_rank(); ++y) c(x, n, y) = ca(x, n, y);
        for (std::size_t x = 0; x < cb.left_rank(); ++x)
            for (std::size_t n = 0; n < n_size; ++n)
                for (std::size_t y = 0; y < cb.right_rank(); ++y)
                    c(off_p + x, n, off_n + y) = scale_b * cb(x, n, y);
        cores.push_back(std::move(c));
    }
    return TTTensor(std::move(cores));
}

}  // namespace

TTTensor tt_add(const TTTensor& a, const TTTensor& b) { return block_sum(a, b, 1.0); }

TTTensor tt_dif(const TTTensor& a, const TTTensor& b) { return block_sum(a, b, -1.0); }

TTTensor tt_square(const TTTensor& t) {
    std::vector<TTCore> cores;
    cores.reserve(t.dim());
    for (const auto& g : t.cores()) {
        const std::size_t r1 = g.left_rank(), n = g.mode_size(), r2 = g.right_rank();
        TTCore sq(r1 * r1, n, r2 * r2);
        for (std::size_t a = 0; a < r1; ++a)
            for (std::size_t a2 = 0; a2 < r1; ++a2)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t b = 0; b < r2; ++b)
                        for (std::size_t b2 = 0; b2 < r2; ++b2)
                            sq(a * r1 + a2, k, b * r2 + b2) = g(a, k, b) * g(a2, k, b2);
        cores.push_back(std::move(sq));
    }
    return TTTensor(std::move(cores));
}

namespace {

TTTensor orthogonalize(const TTTensor& t, RankPolicy policy, double* removed_log) {
    std::vector<TTCore> cores(t.cores().begin(), t.cores().end());
    for (std::size_t i = cores.size(); i-- > 1;) {
        const auto& core = cores[i];
        const auto rows = static_cast<Eigen::Index>(core.left_rank());
        const auto cols = static_cast<Eigen::Index>(core.mode_size() * core.right_rank());
        if (rows > cols && policy == RankPolicy::reject)
            throw std::domain_error("tt_orth: core " + std::to_string(i + 1) + " has left rank " +
                                    std::to_string(rows) + " > mode size * right rank = " +
                                    std::to_string(cols));
        const Eigen::Index kept = std::min(rows, cols);
        // RQ of the row unfolding through QR of its transpose. The unfolding
        // is scaled to unit max-entry first so that Householder norms cannot
        // overflow on tensors with huge element magnitudes.
        Eigen::MatrixXd at = core.row_unfolding().transpose();
        const double scale = at.cwiseAbs().maxCoeff();
        if (scale > 0.0) at /= scale;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(at);
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(cols, kept);
        Eigen::MatrixXd r = qr.matrixQR().topRows(kept).triangularView<Eigen::Upper>();
        if (scale > 0.0) r *= scale;

        TTCore orth(static_cast<std::size_t>(kept), core.mode_size(), core.right_rank());
        orth.row_unfolding() = q.transpose();
        const auto& prev = cores[i - 1];
        TTCore absorbed(prev.left_rank(), prev.mode_size(), static_cast<std::size_t>(kept));
        absorbed.column_unfolding() = prev.column_unfolding() * r.transpose();
        if (removed_log) {
            const double m = absorbed.column_unfolding().cwiseAbs().maxCoeff();
            if (m > 0.0) {
                absorbed.column_unfolding() /= m;
                *removed_log += std::log(m);
            }
        }
        cores[i] = std::move(orth);
        cores[i - 1] = std::move(absorbed);
    }
    return TTTensor(std::move(cores));
}

}  // namespace

TTTensor tt_orth(const TTTensor& t, RankPolicy policy) { return orthogonalize(t, policy, nullptr); }

TTTensor tt_orth_direction(const TTTensor& t, RankPolicy policy, double* log_factor) {
    double local = 0.0;
    double* sink = log_factor ? log_factor : &local;
    *sink = 0.0;
    return orthogonalize(t, policy, sink);
}

double gram_residual(const TTCore& core) {
    const auto m = core.row_unfolding();
    const Eigen::MatrixXd gram = m * m.transpose();
    return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm();
}

double max_gram_residual(const TTTensor& t) {
    double worst = 0.0;
    for (std::size_t i = 1; i < t.dim(); ++i) worst = std::max(worst, gram_residual(t.core(i)));
    return worst;
}

TTTensor tt_random(const Shape& shape, std::span<const std::size_t> ranks, std::uint64_t seed) {
    if (shape.empty()) throw std::domain_error("shape must have at least one mode");
    if (ranks.size() + 1 != shape.size())
        throw std::domain_error("expected " + std::to_string(shape.size() - 1) +
                                " interior ranks, got " + std::to_string(ranks.size()));
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<TTCore> cores;
    cores.reserve(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const std::size_t rp = i == 0 ? 1 : ranks[i - 1];
        const std::size_t rn = i + 1 == shape.size() ? 1 : ranks[i];
        if (rp == 0 || rn == 0) throw std::domain_error("ranks must be >= 1");
        TTCore c(rp, shape[i], rn);
        for (double& v : c.data()) v = normal(gen);
        cores.push_back(std::move(c));
    }
    return TTTensor(std::move(cores));
}

DenseArray to_full(const TTTensor& t, std::size_t budget) {
    const Shape shape = t.shape();
    checked_element_count(shape, budget);
    RowMatrix acc = t.core(0).column_unfolding();
    for (std::size_t i = 1; i < t.dim(); ++i) {
        const auto& core = t.core(i);
        RowMatrix next = acc * core.row_unfolding();
        acc = RowMatrixMap(next.data(), next.rows() * static_cast<Eigen::Index>(core.mode_size()),
                           static_cast<Eigen::Index>(core.right_rank()));
    }
    return DenseArray(shape, std::vector<double>(acc.data(), acc.data() + acc.size()));
}

double max_abs_scan(const TTTensor& t, std::size_t budget) {
    const Shape shape = t.shape();
    const std::size_t split = (t.dim() + 1) / 2;
    checked_element_count(std::span(shape).first(split), budget);
    checked_element_count(std::span(shape).subspan(split), budget);

    RowMatrix left = t.core(0).column_unfolding();
    for (std::size_t i = 1; i < split; ++i) {
        const auto& core = t.core(i);
        RowMatrix next = left * core.row_unfolding();
        left = RowMatrixMap(next.data(), next.rows() * static_cast<Eigen::Index>(core.mode_size()),
                            static_cast<Eigen::Index>(core.right_rank()));
    }
    RowMatrix right = RowMatrix::Ones(1, 1);
    if (split < t.dim()) {
        right = t.core(t.dim() - 1).row_unfolding();
        for (std::size_t i = t.dim() - 1; i-- > split;) {
            const auto& core = t.core(i);
            RowMatrix next = core.column_unfolding() * right;
            right = RowMatrixMap(next.data(), static_cast<Eigen::Index>(core.left_rank()),
                                 next.size() / static_cast<Eigen::Index>(core.left_rank()));
        }
    }
    constexpr Eigen::Index kBlock = 256;
    double best = 0.0;
    RowMatrix block;
    for (Eigen::Index r = 0; r < left.rows(); r += kBlock) {
        const Eigen::Index rows = std::min(kBlock, left.rows() - r);
        block.noalias() = left.middleRows(r, rows) * right;
        best = std::max(best, block.cwiseAbs().maxCoeff());
    }
    return best;
}

TTTensor reversed(const TTTensor& t) {
    std::vector<TTCore> cores;
    cores.reserve(t.dim());
    for (std::size_t i = t.dim(); i-- > 0;) {
        const auto& src = t.core(i);
        TTCore c(src.right_rank(), src.mode_size(), src.left_rank());
        for (std::size_t a = 0; a < src.left_rank(); ++a)
            for (std::size_t n = 0; n < src.mode_size(); ++n)
                for (std::size_t b = 0; b < src.right_rank(); ++b) c(b, n, a) = src(a, n, b);
        cores.push_back(std::move(c));
    }
    return TTTensor(std::move(cores));
}

MultiIndex reversed(const MultiIndex& idx) {
    std::vector<std::size_t> e(idx.begin(), idx.end());
    std::reverse(e.begin(), e.end());
    return MultiIndex(std::move(e));
}

}  // namespace ttopt
