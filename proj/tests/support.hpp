#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "stmf/error.hpp"
#include "stmf/matrix.hpp"

namespace test_support {

using stmf::Mask;
using stmf::MaskedMatrix;
using stmf::Matrix;

inline Matrix uniform_matrix(std::size_t m, std::size_t n, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Matrix out(m, n);
  for (double& x : out.values()) x = d(rng);
  return out;
}

// Random mask that keeps at least one given entry in every row and column.
inline Mask covering_mask(std::size_t m, std::size_t n, double keep, std::mt19937_64& rng) {
  std::bernoulli_distribution b(keep);
  Mask mask(m, n, false);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) mask.set(i, j, b(rng));
  for (std::size_t i = 0; i < m; ++i) mask.set(i, i % n, true);
  for (std::size_t j = 0; j < n; ++j) mask.set(j % m, j, true);
  return mask;
}

// Max-plus product by the definition.
inline Matrix maxplus_oracle(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < a.cols(); ++k) best = std::max(best, a(i, k) + b(k, j));
      out(i, j) = best;
    }
  return out;
}

// True when every given entry of r is >= the max-plus product u (x) v.
inline bool is_subsolution(const MaskedMatrix& r, const Matrix& u, const Matrix& v) {
  const Matrix p = maxplus_oracle(u, v);
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (r.given(i, j) && p(i, j) > r(i, j)) return false;
  return true;
}

// Distance correlation straight from the definition, four nested loops.
inline double dcor_oracle(const Matrix& x, const Matrix& y) {
  const std::size_t n = x.rows();
  auto distances = [n](const Matrix& z) {
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double ss = 0.0;
        for (std::size_t c = 0; c < z.cols(); ++c) ss += (z(a, c) - z(b, c)) * (z(a, c) - z(b, c));
        d[a][b] = std::sqrt(ss);
      }
    return d;
  };
  auto centred = [n](const std::vector<std::vector<double>>& d) {
    auto out = d;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double row = 0.0, col = 0.0, grand = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          row += d[a][k];
          col += d[k][b];
          for (std::size_t l = 0; l < n; ++l) grand += d[k][l];
        }
        const double nn = static_cast<double>(n);
        out[a][b] = d[a][b] - row / nn - col / nn + grand / (nn * nn);
      }
    return out;
  };
  const auto a = centred(distances(x));
  const auto b = centred(distances(y));
  double vxy = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      vxy += a[i][j] * b[i][j];
      vx += a[i][j] * a[i][j];
      vy += b[i][j] * b[i][j];
    }
  const double nn = static_cast<double>(n * n);
  vxy /= nn;
  vx /= nn;
  vy /= nn;
  if (vx * vy <= 0.0) return 0.0;
  return std::sqrt(std::max(vxy, 0.0) / std::sqrt(vx * vy));
}

template <class F>
bool throws_kind(F&& f, stmf::ErrorKind kind) {
  try {
    f();
  } catch (const stmf::Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace test_support
