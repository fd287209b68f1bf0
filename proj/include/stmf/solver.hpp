#pragma once

#include <optional>
#include <vector>

#include "stmf/matrix.hpp"

namespace stmf {

/// The system a (x) x = c; std::nullopt marks a missing right-hand side.
struct LinearSystem {
  MaskedMatrix a;
  std::vector<std::optional<double>> c;
};

/// All residuals c - a below are the greatest double x with x + a <= c after
/// rounding, so the returned vectors are subsolutions under exact comparison.

/// Greatest double x with fl(x + a) <= c; NaN when c is NaN.
double residual(double c, double a);

/// Greatest subsolution by residuation: x_i = min_j (c_j - a_ji) over rows j
/// where both a_ji and c_j are given. Throws EmptyMinimum when a column has no
/// usable row and DimensionMismatch when c has the wrong length.
std::vector<double> greatest_subsolution(const LinearSystem& sys);

/// Column-wise greatest subsolution of u (x) X = r on the given entries of r:
/// X(k, j) = min over given r(i, j) of r(i, j) - u(i, k). Equivalent to
/// (-u)^T (x)* r.
Matrix solve_left(const Matrix& u, const MaskedMatrix& r);

/// Row-wise greatest subsolution of Y (x) v = r on the given entries of r:
/// Y(i, k) = min over given r(i, j) of r(i, j) - v(k, j). Equivalent to
/// r (x)* (-v)^T.
Matrix solve_right(const Matrix& v, const MaskedMatrix& r);

}  // namespace stmf
