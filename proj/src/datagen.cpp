#include "stmf/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stmf/error.hpp"
#include "stmf/random.hpp"
#include "stmf/tropical_ops.hpp"

namespace stmf {

namespace {

constexpr int kMaxSplitAttempts = 1000;

Matrix uniform_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix m(rows, cols);
  for (double& x : m.values()) x = unit(rng);
  return m;
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.true_rank == 0 || spec.true_rank > std::min(spec.rows, spec.cols)) {
    throw Error(ErrorKind::InvalidRank, "true rank must lie in [1, min(rows, cols)]");
  }
  SyntheticData out;
  out.left = uniform_matrix(spec.rows, spec.true_rank, mix_seed(spec.seed, streams::kFactorsLeft));
  out.right = uniform_matrix(spec.true_rank, spec.cols, mix_seed(spec.seed, streams::kFactorsRight));
  out.matrix = MaskedMatrix(trop_matmul(out.left, out.right));
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> MaskSplit::test_indices() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < test.rows(); ++i)
    for (std::size_t j = 0; j < test.cols(); ++j)
      if (test(i, j)) out.emplace_back(i, j);
  return out;
}

MaskSplit mask_split(const MaskedMatrix& r, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "test fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> given;
  given.reserve(r.given_count());
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (r.given(i, j)) given.push_back(i * r.cols() + j);

  const auto held_out = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(given.size())));
  // Covering every row and column needs at least max(m, n) training entries.
  if (!r.has_full_coverage() || given.size() - held_out < std::max(r.rows(), r.cols())) {
    throw Error(ErrorKind::InfeasibleSplit, "cannot keep a training entry in every row and column");
  }

  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxSplitAttempts; ++attempt) {
    std::vector<std::size_t> order = given;
    for (std::size_t s = 0; s < held_out; ++s) {
      std::uniform_int_distribution<std::size_t> pick(s, order.size() - 1);
      std::swap(order[s], order[pick(rng)]);
    }
    MaskSplit split{r.mask(), Mask(r.rows(), r.cols(), false), test_fraction, seed};
    for (std::size_t s = 0; s < held_out; ++s) {
      const std::size_t i = order[s] / r.cols();
      const std::size_t j = order[s] % r.cols();
      split.train.set(i, j, false);
      split.test.set(i, j, true);
    }
    if (r.restricted_to(split.train).has_full_coverage()) return split;
  }
  throw Error(ErrorKind::InfeasibleSplit,
              "no split keeping every row and column covered after " + std::to_string(kMaxSplitAttempts) + " draws");
}

MaskSplit split_from_test_indices(const MaskedMatrix& r, double test_fraction, std::uint64_t seed,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& test_indices) {
  MaskSplit split{r.mask(), Mask(r.rows(), r.cols(), false), test_fraction, seed};
  for (const auto& [i, j] : test_indices) {
    if (i >= r.rows() || j >= r.cols() || !r.given(i, j)) {
      throw Error(ErrorKind::InvalidArgument, "held-out index (" + std::to_string(i) + ", " + std::to_string(j) +
                                                  ") is not a given entry");
    }
    split.train.set(i, j, false);
    split.test.set(i, j, true);
  }
  return split;
}

MaskedMatrix log_transform(const MaskedMatrix& r) {
  Matrix out = r.data();
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j) {
      if (!r.given(i, j)) continue;
      if (r(i, j) < 0.0) {
        throw Error(ErrorKind::NegativeInput, "log_transform: negative entry at (" + std::to_string(i) + ", " +
                                                  std::to_string(j) + ")");
      }
      out(i, j) = std::log2(r(i, j) + 1.0);
    }
  }
  return MaskedMatrix(std::move(out), r.mask());
}

}  // namespace stmf
