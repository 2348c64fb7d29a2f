#include "ttopt/tt_svd.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace ttopt {

namespace {

struct Truncated {
    Eigen::MatrixXd u;        // m x r
    Eigen::MatrixXd sv_t_cm;  // n x r, column-major: (S V^T)^T
};

std::size_t truncation_rank(const Eigen::VectorXd& s, double delta) {
    std::size_t r = static_cast<std::size_t>(s.size());
    double tail = 0.0;
    while (r > 1) {
        const double next = tail + s(static_cast<Eigen::Index>(r) - 1) * s(static_cast<Eigen::Index>(r) - 1);
        if (next > delta * delta) break;
        tail = next;
        --r;
    }
    return r;
}

// Truncated SVD of the row-major m x n matrix stored at `data`. The short
// side goes through a Householder QR first so the SVD only sees a square
// factor.
Truncated truncated_svd(const double* data, Eigen::Index m, Eigen::Index n, double delta) {
    Truncated out;
    if (m <= n) {
        // Row-major M (m x n) is column-major M^T (n x m).
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::Map<const Eigen::MatrixXd>(data, n, m));
        const Eigen::MatrixXd r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
        // M = R^T Q^T = V_r S U_r^T Q^T
        const auto rank = static_cast<Eigen::Index>(truncation_rank(svd.singularValues(), delta));
        out.u = svd.matrixV().leftCols(rank);
        const Eigen::MatrixXd qu = qr.householderQ() * (Eigen::MatrixXd::Identity(n, m) * svd.matrixU().leftCols(rank));
        out.sv_t_cm = qu * svd.singularValues().head(rank).asDiagonal();
    } else {
        const Eigen::MatrixXd a = Eigen::Map<const RowMatrix>(data, m, n);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
        const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto rank = static_cast<Eigen::Index>(truncation_rank(svd.singularValues(), delta));
        out.u = qr.householderQ() * (Eigen::MatrixXd::Identity(m, n) * svd.matrixU().leftCols(rank));
        out.sv_t_cm = svd.matrixV().leftCols(rank) * svd.singularValues().head(rank).asDiagonal();
    }
    return out;
}

}  // namespace

TTTensor tt_svd(const DenseArray& full, double rel_tol) {
    if (!(rel_tol >= 0.0)) throw std::domain_error("tt_svd: tolerance must be non-negative");
    const auto shape = full.shape();
    const std::size_t d = shape.size();
    double norm = 0.0;
    for (double v : full.values()) norm += v * v;
    norm = std::sqrt(norm);
    const double delta = d > 1 ? rel_tol * norm / std::sqrt(static_cast<double>(d - 1)) : 0.0;

    std::vector<TTCore> cores;
    std::vector<double> rest(full.values().begin(), full.values().end());
    std::size_t r_prev = 1;
    std::size_t cols = full.size();
    for (std::size_t k = 0; k + 1 < d; ++k) {
        const std::size_t rows = r_prev * shape[k];
        cols /= shape[k];
        auto t = truncated_svd(rest.data(), static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(cols), delta);
        const auto r = static_cast<std::size_t>(t.u.cols());
        TTCore core(r_prev, shape[k], r);
        core.column_unfolding() = t.u;
        cores.push_back(std::move(core));
        // Column-major (cols x r) is row-major (r x cols): the next remainder.
        rest.assign(t.sv_t_cm.data(), t.sv_t_cm.data() + t.sv_t_cm.size());
        r_prev = r;
    }
    cores.emplace_back(r_prev, shape[d - 1], 1, std::move(rest));
    return TTTensor(std::move(cores));
}

}  // namespace ttopt
