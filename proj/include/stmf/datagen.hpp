#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "stmf/matrix.hpp"

namespace stmf {

struct SyntheticSpec {
  std::size_t rows = 200;
  std::size_t cols = 100;
  std::size_t true_rank = 3;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  MaskedMatrix matrix;  // fully given, left (x) right
  Matrix left;          // rows x true_rank
  Matrix right;         // true_rank x cols
};

/// Max-plus product of two matrices with i.i.d. uniform [0, 1) entries.
/// Throws InvalidRank if true_rank is 0 or exceeds min(rows, cols).
SyntheticData generate_synthetic(const SyntheticSpec& spec);

struct MaskSplit {
  Mask train;
  Mask test;
  double test_fraction = 0.0;
  std::uint64_t seed = 0;

  /// Held-out entries in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> test_indices() const;
};

/// Holds out floor(test_fraction * given) given entries chosen uniformly
/// without replacement. Draws that would leave a row or column without a
/// training entry are rejected and redrawn; InfeasibleSplit is raised when
/// that cannot succeed.
MaskSplit mask_split(const MaskedMatrix& r, double test_fraction, std::uint64_t seed);

/// Rebuilds a split from held-out indices (e.g. a JSON sidecar).
MaskSplit split_from_test_indices(const MaskedMatrix& r, double test_fraction, std::uint64_t seed,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& test_indices);

/// log2(x + 1) on given entries. Throws NegativeInput.
MaskedMatrix log_transform(const MaskedMatrix& r);

}  // namespace stmf
