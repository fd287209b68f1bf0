#include "stmf/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stmf {

namespace {

// Works on a tall matrix (rows >= cols).
Svd jacobi_tall(Matrix a, double tolerance, int max_sweeps) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix v(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += a(i, p) * a(i, p);
          beta += a(i, q) * a(i, q);
          gamma += a(i, p) * a(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= tolerance * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) ss += a(i, j) * a(i, j);
    norms[j] = std::sqrt(ss);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  Svd out{Matrix(m, n), std::vector<double>(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.s[c] = norms[src];
    for (std::size_t i = 0; i < m; ++i) out.u(i, c) = norms[src] > 0.0 ? a(i, src) / norms[src] : 0.0;
    for (std::size_t i = 0; i < n; ++i) out.v(i, c) = v(i, src);
  }
  return out;
}

}  // namespace

Svd jacobi_svd(const Matrix& a, double tolerance, int max_sweeps) {
  if (a.rows() >= a.cols()) return jacobi_tall(a, tolerance, max_sweeps);
  Svd t = jacobi_tall(a.transposed(), tolerance, max_sweeps);
  return Svd{std::move(t.v), std::move(t.s), std::move(t.u)};
}

}  // namespace stmf
