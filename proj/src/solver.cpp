#include "stmf/solver.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "stmf/error.hpp"

namespace stmf {

namespace {

// Order-preserving integer key of a double (-0 and +0 share key 0).
inline std::int64_t key_of(double x) {
  const auto bits = std::bit_cast<std::int64_t>(x);
  return bits >= 0 ? bits : -(bits & std::numeric_limits<std::int64_t>::max());
}

inline double from_key(std::int64_t k) {
  return k >= 0 ? std::bit_cast<double>(k)
                : std::bit_cast<double>((-k) | std::numeric_limits<std::int64_t>::min());
}

inline bool fits(double x, double a, double c) { return x + a <= c; }

// Largest feasible double above x, which is known to fit. Gallop then bisect.
[[gnu::noinline]] double climb(double x, double a, double c) {
  std::int64_t lo = key_of(x);
  std::int64_t step = 1;
  while (fits(from_key(lo + step), a, c)) {
    lo += step;
    step *= 2;
  }
  std::int64_t hi = lo + step;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (fits(from_key(mid), a, c) ? lo : hi) = mid;
  }
  return from_key(lo);
}

// Greatest double x with fl(x + a) <= c. Plain c - a can miss by an ulp in
// either direction: one step down repairs an overshoot, and when the next
// double up still fits we climb. NaN input (a missing entry) stays NaN.
inline double residual_impl(double c, double a) {
  const double x = c - a;
  if (x + a > c) return from_key(key_of(x) - 1);
  if (fits(from_key(key_of(x) + 1), a, c)) return climb(x, a, c);
  return x;
}

}  // namespace

double residual(double c, double a) { return residual_impl(c, a); }

std::vector<double> greatest_subsolution(const LinearSystem& sys) {
  const MaskedMatrix& a = sys.a;
  if (sys.c.size() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "greatest_subsolution: rhs length differs from row count");
  }
  std::vector<double> x(a.cols());
  for (std::size_t col = 0; col < a.cols(); ++col) {
    bool found = false;
    double best = 0.0;
    for (std::size_t row = 0; row < a.rows(); ++row) {
      if (!a.given(row, col) || !sys.c[row]) continue;
      const double candidate = residual_impl(*sys.c[row], a(row, col));
      if (!found || candidate < best) {
        best = candidate;
        found = true;
      }
    }
    if (!found) {
      throw Error(ErrorKind::EmptyMinimum,
                  "greatest_subsolution: column " + std::to_string(col) + " has no usable row");
    }
    x[col] = best;
  }
  return x;
}

// Both solvers take the minimum of rounded differences c - a, then replace it
// by the exact residual of the winning constraint. When the runner-up clears the minimum
// by more than tie_margin() the winner is certain. Near
// ties are confirmed against every constraint and lowered to the exact
// residual of each violated one; lowering never breaks a constraint already
// met, so one pass ends at the exact minimum. Missing entries of r hold NaN
// and every comparison against NaN is false, so they drop out without a mask
// lookup.

namespace {

// Rounded and exact residuals differ by at most 2 eps (|s| + |a|); a gap over
// twice that between the smallest two rounded values settles the winner.
inline double tie_margin(double best, double factor_scale) {
  return 8.0 * (std::abs(best) + factor_scale) * std::numeric_limits<double>::epsilon() +
         std::numeric_limits<double>::min();
}

}  // namespace

Matrix solve_left(const Matrix& u, const MaskedMatrix& r) {
  if (u.rows() != r.rows()) throw Error(ErrorKind::DimensionMismatch, "solve_left: row count mismatch");
  const std::size_t m = r.rows();
  const std::size_t rank = u.cols();
  const std::size_t n = r.cols();
  for (std::size_t j = 0; j < n; ++j) {
    bool found = false;
    for (std::size_t i = 0; i < m && !found; ++i) found = r.given(i, j);
    if (!found) {
      throw Error(ErrorKind::EmptyMinimum, "solve_left: column " + std::to_string(j) + " has no given entry");
    }
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  Matrix v(rank, n, kInf);
  std::vector<double> second(rank * n, kInf);
  std::vector<std::size_t> arg(rank * n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* __restrict rrow = r.data().row(i).data();
    for (std::size_t k = 0; k < rank; ++k) {
      const double a = u(i, k);
      double* __restrict best = v.row(k).data();
      double* __restrict next = second.data() + k * n;
      std::size_t* __restrict at = arg.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double s = rrow[j] - a;
        const double b = best[j];
        const bool take = s < b;
        const double displaced = take ? b : s;
        next[j] = displaced < next[j] ? displaced : next[j];
        best[j] = take ? s : b;
        at[j] = take ? i : at[j];
      }
    }
  }

  for (std::size_t k = 0; k < rank; ++k) {
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(u(i, k)));
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t w = arg[k * n + j];
      double x = residual_impl(r(w, j), u(w, k));
      if (!(second[k * n + j] > v(k, j) + tie_margin(v(k, j), scale))) {
        for (std::size_t i = 0; i < m; ++i)
          if (u(i, k) + x > r(i, j)) x = residual_impl(r(i, j), u(i, k));
      }
      v(k, j) = x;
    }
  }
  return v;
}

Matrix solve_right(const Matrix& v, const MaskedMatrix& r) {
  if (v.cols() != r.cols()) throw Error(ErrorKind::DimensionMismatch, "solve_right: column count mismatch");
  const std::size_t rank = v.rows();
  const std::size_t n = r.cols();
  std::vector<double> scale(rank, 0.0);
  for (std::size_t k = 0; k < rank; ++k)
    for (double x : v.row(k)) scale[k] = std::max(scale[k], std::abs(x));
  Matrix u(r.rows(), rank);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    const auto rrow = r.data().row(i);
    bool found = false;
    for (std::size_t j = 0; j < n && !found; ++j) found = r.given(i, j);
    if (!found) {
      throw Error(ErrorKind::EmptyMinimum, "solve_right: row " + std::to_string(i) + " has no given entry");
    }
    for (std::size_t k = 0; k < rank; ++k) {
      const auto vrow = v.row(k);
      double best = std::numeric_limits<double>::infinity();
      double next = best;
      std::size_t at = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const double s = rrow[j] - vrow[j];
        const bool take = s < best;
        const double displaced = take ? best : s;
        next = displaced < next ? displaced : next;
        best = take ? s : best;
        at = take ? j : at;
      }
      double x = residual_impl(rrow[at], vrow[at]);
      if (!(next > best + tie_margin(best, scale[k]))) {
        for (std::size_t j = 0; j < n; ++j)
          if (vrow[j] + x > rrow[j]) x = residual_impl(rrow[j], vrow[j]);
      }
      u(i, k) = x;
    }
  }
  return u;
}

}  // namespace stmf
