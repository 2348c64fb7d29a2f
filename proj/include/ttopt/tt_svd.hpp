#pragma once

#include "ttopt/dense.hpp"
#include "ttopt/tt_tensor.hpp"

namespace ttopt {

/// TT-SVD: sequential unfoldings with truncated SVDs. Each of the d-1
/// truncations discards singular values with tail norm at most
/// rel_tol / sqrt(d-1) * ||full||_F, so the reconstruction satisfies
/// ||full - to_full(result)||_F <= rel_tol * ||full||_F.
TTTensor tt_svd(const DenseArray& full, double rel_tol);

}  // namespace ttopt
