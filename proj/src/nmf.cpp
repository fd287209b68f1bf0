#include "stmf/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stmf/error.hpp"
#include "stmf/random.hpp"
#include "stmf/svd.hpp"

namespace stmf {

namespace {

void require_nonnegative(const MaskedMatrix& r) {
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (r.given(i, j) && r(i, j) < 0.0) {
        throw Error(ErrorKind::NegativeInput, "NMF input has a negative entry at (" + std::to_string(i) + ", " +
                                                  std::to_string(j) + ")");
      }
}

void require_rank(const MaskedMatrix& r, std::size_t rank) {
  if (rank == 0 || rank > std::min(r.rows(), r.cols())) {
    throw Error(ErrorKind::InvalidRank, "NMF rank must lie in [1, min(rows, cols)]");
  }
}

// r with missing entries replaced by zero (weight 0 in every product).
Matrix zero_filled(const MaskedMatrix& r) {
  Matrix out(r.rows(), r.cols());
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) out(i, j) = r.given(i, j) ? r(i, j) : 0.0;
  return out;
}

void mask_in_place(const MaskedMatrix& r, Matrix& m) {
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (!r.given(i, j)) m(i, j) = 0.0;
}

double norm(const std::vector<double>& x) {
  double ss = 0.0;
  for (double v : x) ss += v * v;
  return std::sqrt(ss);
}

}  // namespace

const char* to_string(NmfInit init) { return init == NmfInit::Nndsvd ? "nndsvd" : "random"; }

std::optional<NmfInit> parse_nmf_init(std::string_view name) {
  if (name == "nndsvd") return NmfInit::Nndsvd;
  if (name == "random") return NmfInit::Random;
  return std::nullopt;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "matmul: inner dimensions differ");
  Matrix out(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto orow = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

NmfFactorization nndsvd_init(const MaskedMatrix& r, std::size_t rank) {
  require_nonnegative(r);
  require_rank(r, rank);
  const std::size_t m = r.rows();
  const std::size_t n = r.cols();

  Matrix dense = r.data();
  const double fill = r.given_mean();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!r.given(i, j)) dense(i, j) = fill;

  const Svd svd = jacobi_svd(dense);
  NmfFactorization f{Matrix(m, rank, 0.0), Matrix(rank, n, 0.0)};

  const double lead = std::sqrt(svd.s[0]);
  for (std::size_t i = 0; i < m; ++i) f.w(i, 0) = lead * std::abs(svd.u(i, 0));
  for (std::size_t j = 0; j < n; ++j) f.h(0, j) = lead * std::abs(svd.v(j, 0));

  std::vector<double> xp(m), xn(m), yp(n), yn(n);
  for (std::size_t k = 1; k < rank; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      xp[i] = std::max(svd.u(i, k), 0.0);
      xn[i] = std::max(-svd.u(i, k), 0.0);
    }
    for (std::size_t j = 0; j < n; ++j) {
      yp[j] = std::max(svd.v(j, k), 0.0);
      yn[j] = std::max(-svd.v(j, k), 0.0);
    }
    const double nxp = norm(xp), nxn = norm(xn), nyp = norm(yp), nyn = norm(yn);
    const double mp = nxp * nyp;
    const double mn = nxn * nyn;
    const bool positive = mp > mn;
    const double sigma = positive ? mp : mn;
    if (sigma <= 0.0) continue;
    const double scale = std::sqrt(svd.s[k] * sigma);
    const auto& x = positive ? xp : xn;
    const auto& y = positive ? yp : yn;
    const double nx = positive ? nxp : nxn;
    const double ny = positive ? nyp : nyn;
    for (std::size_t i = 0; i < m; ++i) f.w(i, k) = scale * x[i] / nx;
    for (std::size_t j = 0; j < n; ++j) f.h(k, j) = scale * y[j] / ny;
  }

  for (double& x : f.w.values()) x = std::max(x, kNndsvdFloor);
  for (double& x : f.h.values()) x = std::max(x, kNndsvdFloor);
  return f;
}

NmfFactorization random_nmf_init(const MaskedMatrix& r, std::size_t rank, std::uint64_t seed) {
  require_nonnegative(r);
  require_rank(r, rank);
  const double scale = std::sqrt(std::max(r.given_mean(), 0.0) / static_cast<double>(rank));
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  NmfFactorization f{Matrix(r.rows(), rank), Matrix(rank, r.cols())};
  for (double& x : f.w.values()) x = std::max(scale * unit(rng), kNndsvdFloor);
  for (double& x : f.h.values()) x = std::max(scale * unit(rng), kNndsvdFloor);
  return f;
}

double masked_squared_error(const MaskedMatrix& r, const NmfFactorization& f) {
  const Matrix approx = matmul(f.w, f.h);
  double total = 0.0;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (r.given(i, j)) {
        const double d = r(i, j) - approx(i, j);
        total += d * d;
      }
  return total;
}

void nmf_update(const MaskedMatrix& r, NmfFactorization& f) {
  const Matrix target = zero_filled(r);
  const std::size_t rank = f.rank();

  Matrix approx = matmul(f.w, f.h);
  mask_in_place(r, approx);
  const Matrix wt = f.w.transposed();
  const Matrix h_num = matmul(wt, target);
  const Matrix h_den = matmul(wt, approx);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t j = 0; j < f.h.cols(); ++j)
      f.h(k, j) *= h_num(k, j) / std::max(h_den(k, j), kDenominatorFloor);

  approx = matmul(f.w, f.h);
  mask_in_place(r, approx);
  const Matrix ht = f.h.transposed();
  const Matrix w_num = matmul(target, ht);
  const Matrix w_den = matmul(approx, ht);
  for (std::size_t i = 0; i < f.w.rows(); ++i)
    for (std::size_t k = 0; k < rank; ++k) f.w(i, k) *= w_num(i, k) / std::max(w_den(i, k), kDenominatorFloor);
}

NmfResult nmf_fit(const MaskedMatrix& r, const NmfOptions& options) {
  require_nonnegative(r);
  require_rank(r, options.rank);
  NmfResult result;
  result.factors = options.init == NmfInit::Nndsvd ? nndsvd_init(r, options.rank)
                                                   : random_nmf_init(r, options.rank, options.seed);
  double previous = masked_squared_error(r, result.factors);
  result.trace.objective.push_back(previous);
  while (result.trace.iterations_run < options.max_iterations) {
    nmf_update(r, result.factors);
    ++result.trace.iterations_run;
    const double current = masked_squared_error(r, result.factors);
    result.trace.objective.push_back(current);
    if (previous == 0.0 || std::abs(previous - current) / previous < options.relative_tolerance) break;
    previous = current;
  }
  return result;
}

Matrix nmf_predict(const NmfFactorization& f) { return matmul(f.w, f.h); }

std::vector<Matrix> nmf_latent_matrices(const NmfFactorization& f) {
  std::vector<Matrix> out;
  out.reserve(f.rank());
  for (std::size_t k = 0; k < f.rank(); ++k) {
    Matrix latent(f.w.rows(), f.h.cols());
    for (std::size_t i = 0; i < latent.rows(); ++i)
      for (std::size_t j = 0; j < latent.cols(); ++j) latent(i, j) = f.w(i, k) * f.h(k, j);
    out.push_back(std::move(latent));
  }
  return out;
}

}  // namespace stmf
