#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "stmf/matrix.hpp"

namespace stmf {

struct NmfFactorization {
  Matrix w;  // m x r, nonnegative
  Matrix h;  // r x n, nonnegative

  std::size_t rank() const noexcept { return w.cols(); }
};

enum class NmfInit { Nndsvd, Random };
const char* to_string(NmfInit init);
std::optional<NmfInit> parse_nmf_init(std::string_view name);

/// Entries below this are lifted to it after NNDSVD so that multiplicative
/// updates can still move them.
inline constexpr double kNndsvdFloor = 1e-8;
/// Lower bound applied to every multiplicative-update denominator.
inline constexpr double kDenominatorFloor = 1e-12;

/// NNDSVD initialisation (Boutsidis and Gallopoulos). Missing entries are
/// imputed with the mean of the given entries before the SVD. Throws
/// NegativeInput and InvalidRank (rank 0 or above min(m, n)).
NmfFactorization nndsvd_init(const MaskedMatrix& r, std::size_t rank);

/// Uniform [0, sqrt(mean / rank)) entries, seeded.
NmfFactorization random_nmf_init(const MaskedMatrix& r, std::size_t rank, std::uint64_t seed);

/// Sum over given entries of (r - w h)^2.
double masked_squared_error(const MaskedMatrix& r, const NmfFactorization& f);

struct NmfOptions {
  std::size_t rank = 1;
  std::size_t max_iterations = 500;
  std::uint64_t seed = 0;
  NmfInit init = NmfInit::Nndsvd;
  /// Stop once |prev - cur| / prev falls below this or prev reaches 0.
  double relative_tolerance = 1e-9;
};

struct NmfTrace {
  /// Masked objective after initialisation and after every iteration.
  std::vector<double> objective;
  std::size_t iterations_run = 0;
};

struct NmfResult {
  NmfFactorization factors;
  NmfTrace trace;
};

/// Weighted multiplicative updates (mask as 0/1 weights) from the chosen
/// initialisation.
NmfResult nmf_fit(const MaskedMatrix& r, const NmfOptions& options);

/// One H update followed by one W update.
void nmf_update(const MaskedMatrix& r, NmfFactorization& f);

Matrix nmf_predict(const NmfFactorization& f);

/// Outer product of column k of w with row k of h, for each k. They sum to
/// nmf_predict(f).
std::vector<Matrix> nmf_latent_matrices(const NmfFactorization& f);

/// Ordinary matrix product.
Matrix matmul(const Matrix& a, const Matrix& b);

}  // namespace stmf
