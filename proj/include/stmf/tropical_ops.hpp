#pragma once

#include <limits>

#include "stmf/matrix.hpp"

namespace stmf {

/// Max-plus product: out(i, j) = max_k a(i, k) + b(k, j).
Matrix trop_matmul(const Matrix& a, const Matrix& b);

/// Masked (min,+) product: out(i, j) = min over k where both a(i, k) and
/// b(k, j) are given of a(i, k) + b(k, j). Throws EmptyMinimum if some output
/// entry has no given pair.
Matrix sparse_minplus_matmul(const MaskedMatrix& a, const MaskedMatrix& b);

/// Sum of |r(i, j) - approx(i, j)| over the given entries of r.
double b_norm(const MaskedMatrix& r, const Matrix& approx);

/// b-norm of r against u (x) v, evaluated only at given entries of r without
/// forming the full product. Summation stops early, returning a partial sum
/// >= stop_at, once the running total reaches stop_at.
double b_norm_of_product(const MaskedMatrix& r, const Matrix& u, const Matrix& v,
                         double stop_at = std::numeric_limits<double>::infinity());

/// Column j of the result is column p.forward()[j] of the input.
MaskedMatrix permute_columns(const MaskedMatrix& r, const Permutation& p);
Matrix permute_columns(const Matrix& m, const Permutation& p);
/// Undoes permute_columns(m, p).
Matrix apply_inverse_to_columns(const Matrix& m, const Permutation& p);
MaskedMatrix apply_inverse_to_columns(const MaskedMatrix& m, const Permutation& p);

}  // namespace stmf
