#include "stmf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "stmf/error.hpp"

namespace stmf {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::RaggedRows, "matrix rows differ in length");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::size_t Mask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Mask Mask::transposed() const {
  Mask t(cols_, rows_, false);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.set(j, i, (*this)(i, j));
  return t;
}

MaskedMatrix::MaskedMatrix(Matrix data)
    : MaskedMatrix(std::move(data), Mask()) {}

MaskedMatrix::MaskedMatrix(Matrix data, Mask mask) : data_(std::move(data)), mask_(std::move(mask)) {
  if (mask_.rows() == 0 && mask_.cols() == 0) mask_ = Mask(data_.rows(), data_.cols(), true);
  if (mask_.rows() != data_.rows() || mask_.cols() != data_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "mask shape does not match data shape");
  }
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      if (!mask_(i, j)) {
        data_(i, j) = std::numeric_limits<double>::quiet_NaN();
      } else if (!std::isfinite(data_(i, j))) {
        throw Error(ErrorKind::InvalidArgument,
                    "given entry (" + std::to_string(i) + ", " + std::to_string(j) + ") is not finite");
      }
    }
  }
}

bool MaskedMatrix::has_full_coverage() const {
  std::vector<bool> row_seen(rows(), false), col_seen(cols(), false);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      if (mask_(i, j)) row_seen[i] = col_seen[j] = true;
  return std::all_of(row_seen.begin(), row_seen.end(), [](bool b) { return b; }) &&
         std::all_of(col_seen.begin(), col_seen.end(), [](bool b) { return b; });
}

MaskedMatrix MaskedMatrix::restricted_to(const Mask& keep) const {
  if (keep.rows() != rows() || keep.cols() != cols()) {
    throw Error(ErrorKind::DimensionMismatch, "restriction mask shape mismatch");
  }
  Mask m(rows(), cols(), false);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) m.set(i, j, keep(i, j) && mask_(i, j));
  return MaskedMatrix(data_, std::move(m));
}

MaskedMatrix MaskedMatrix::transposed() const {
  return MaskedMatrix(data_.transposed(), mask_.transposed());
}

double MaskedMatrix::given_mean() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      if (mask_(i, j)) {
        sum += data_(i, j);
        ++n;
      }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

bool operator==(const MaskedMatrix& a, const MaskedMatrix& b) {
  if (a.mask_ != b.mask_ || a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.mask_(i, j) && a.data_(i, j) != b.data_(i, j)) return false;
  return true;
}

Permutation::Permutation(std::vector<std::size_t> forward) : forward_(std::move(forward)) {
  const std::size_t n = forward_.size();
  inverse_.assign(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t target = forward_[j];
    if (target >= n || inverse_[target] != n) {
      throw Error(ErrorKind::InvalidArgument, "not a permutation");
    }
    inverse_[target] = j;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> fwd(n);
  std::iota(fwd.begin(), fwd.end(), std::size_t{0});
  return Permutation(std::move(fwd));
}

}  // namespace stmf
