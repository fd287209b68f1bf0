#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stmf {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Builds from nested rows; throws RaggedRows when lengths differ.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Per-entry boolean mask; true marks a given (observed) entry.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t rows, std::size_t cols, bool fill = true)
      : rows_(rows), cols_(cols), bits_(rows * cols, fill ? 1 : 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool given) { bits_[i * cols_ + j] = given ? 1 : 0; }

  std::size_t count() const noexcept;
  bool all() const noexcept { return count() == bits_.size(); }
  Mask transposed() const;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// A dense matrix with a parallel given/missing mask. Given entries are always
/// finite; the value stored under a missing entry is unspecified (NaN by
/// convention) and never read by the algorithms.
class MaskedMatrix {
 public:
  MaskedMatrix() = default;
  /// Fully given.
  explicit MaskedMatrix(Matrix data);
  /// Throws DimensionMismatch on shape disagreement and InvalidArgument if a
  /// given entry is not finite. Missing entries are normalised to NaN.
  MaskedMatrix(Matrix data, Mask mask);

  std::size_t rows() const noexcept { return data_.rows(); }
  std::size_t cols() const noexcept { return data_.cols(); }

  const Matrix& data() const noexcept { return data_; }
  const Mask& mask() const noexcept { return mask_; }

  bool given(std::size_t i, std::size_t j) const { return mask_(i, j); }
  double operator()(std::size_t i, std::size_t j) const { return data_(i, j); }

  std::size_t given_count() const noexcept { return mask_.count(); }
  bool fully_given() const noexcept { return mask_.all(); }
  /// Every row and every column holds at least one given entry.
  bool has_full_coverage() const;

  /// Same data restricted to the entries selected by `keep` (which must be a
  /// subset of the given entries).
  MaskedMatrix restricted_to(const Mask& keep) const;
  MaskedMatrix transposed() const;

  /// Mean of the given entries; 0 when nothing is given.
  double given_mean() const;

  friend bool operator==(const MaskedMatrix& a, const MaskedMatrix& b);

 private:
  Matrix data_;
  Mask mask_;
};

/// A bijection on [0, n) with its inverse stored alongside.
class Permutation {
 public:
  Permutation() = default;
  /// Throws InvalidArgument if `forward` is not a permutation.
  explicit Permutation(std::vector<std::size_t> forward);
  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return forward_.size(); }
  const std::vector<std::size_t>& forward() const noexcept { return forward_; }
  const std::vector<std::size_t>& inverse() const noexcept { return inverse_; }
  Permutation inverted() const { return Permutation(inverse_); }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> forward_;
  std::vector<std::size_t> inverse_;
};

}  // namespace stmf
