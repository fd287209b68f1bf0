#include "stmf/tropical_ops.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "stmf/error.hpp"

namespace stmf {

namespace {

void require_same_shape(std::size_t r1, std::size_t c1, std::size_t r2, std::size_t c2, const char* what) {
  if (r1 != r2 || c1 != c2) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": shapes " + std::to_string(r1) + "x" + std::to_string(c1) + " and " +
                    std::to_string(r2) + "x" + std::to_string(c2) + " differ");
  }
}

}  // namespace

Matrix trop_matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "trop_matmul: inner dimensions differ");
  }
  const std::size_t inner = a.cols();
  Matrix out(a.rows(), b.cols(), -std::numeric_limits<double>::infinity());
  if (inner == 0) return out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double best = a(i, 0) + b(0, j);
      for (std::size_t k = 1; k < inner; ++k) {
        const double s = a(i, k) + b(k, j);
        if (s > best) best = s;
      }
      out(i, j) = best;
    }
  }
  return out;
}

Matrix sparse_minplus_matmul(const MaskedMatrix& a, const MaskedMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "sparse_minplus_matmul: inner dimensions differ");
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      bool found = false;
      double best = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (!a.given(i, k) || !b.given(k, j)) continue;
        const double s = a(i, k) + b(k, j);
        if (!found || s < best) {
          best = s;
          found = true;
        }
      }
      if (!found) {
        throw Error(ErrorKind::EmptyMinimum, "sparse_minplus_matmul: no given pair for entry (" +
                                                 std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      out(i, j) = best;
    }
  }
  return out;
}

double b_norm(const MaskedMatrix& r, const Matrix& approx) {
  require_same_shape(r.rows(), r.cols(), approx.rows(), approx.cols(), "b_norm");
  double total = 0.0;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (r.given(i, j)) total += std::abs(r(i, j) - approx(i, j));
  return total;
}

double b_norm_of_product(const MaskedMatrix& r, const Matrix& u, const Matrix& v, double stop_at) {
  if (u.cols() != v.rows()) throw Error(ErrorKind::DimensionMismatch, "b_norm_of_product: rank mismatch");
  require_same_shape(r.rows(), r.cols(), u.rows(), v.cols(), "b_norm_of_product");
  const std::size_t rank = u.cols();
  if (rank == 0) throw Error(ErrorKind::InvalidRank, "b_norm_of_product: rank must be positive");
  const std::size_t n = r.cols();
  std::vector<double> product(n);
  double total = 0.0;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    const double u0 = u(i, 0);
    const auto v0 = v.row(0);
    for (std::size_t j = 0; j < n; ++j) product[j] = u0 + v0[j];
    for (std::size_t k = 1; k < rank; ++k) {
      const double uk = u(i, k);
      const auto vk = v.row(k);
      for (std::size_t j = 0; j < n; ++j) {
        const double s = uk + vk[j];
        product[j] = s > product[j] ? s : product[j];
      }
    }
    const auto rrow = r.data().row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (r.given(i, j)) total += std::abs(rrow[j] - product[j]);
    }
    if (total >= stop_at) return total;
  }
  return total;
}

Matrix permute_columns(const Matrix& m, const Permutation& p) {
  if (p.size() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "permutation length mismatch");
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, p.forward()[j]);
  return out;
}

MaskedMatrix permute_columns(const MaskedMatrix& r, const Permutation& p) {
  if (p.size() != r.cols()) throw Error(ErrorKind::DimensionMismatch, "permutation length mismatch");
  Matrix data = permute_columns(r.data(), p);
  Mask mask(r.rows(), r.cols(), false);
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) mask.set(i, j, r.given(i, p.forward()[j]));
  return MaskedMatrix(std::move(data), std::move(mask));
}

Matrix apply_inverse_to_columns(const Matrix& m, const Permutation& p) {
  return permute_columns(m, p.inverted());
}

MaskedMatrix apply_inverse_to_columns(const MaskedMatrix& m, const Permutation& p) {
  return permute_columns(m, p.inverted());
}

}  // namespace stmf
