#pragma once

#include <vector>

#include "stmf/matrix.hpp"

namespace stmf {

/// Thin SVD a = u * diag(s) * v^T with singular values in decreasing order.
struct Svd {
  Matrix u;               // m x p, p = min(m, n)
  std::vector<double> s;  // p
  Matrix v;               // n x p
};

/// One-sided (Hestenes) Jacobi SVD. Sweeps until every column pair satisfies
/// |a_i . a_j| <= tolerance * ||a_i|| ||a_j||.
Svd jacobi_svd(const Matrix& a, double tolerance = 1e-14, int max_sweeps = 100);

}  // namespace stmf
