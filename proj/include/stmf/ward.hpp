#pragma once

#include <cstddef>
#include <vector>

#include "stmf/matrix.hpp"

namespace stmf {

/// One agglomeration step. Clusters are identified by their smallest member
/// index, so `left` and `right` name the two merged clusters and the result
/// is known as min(left, right) afterwards.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  /// Ward distance (square root of the Lance-Williams squared update).
  double height = 0.0;
  std::size_t size = 0;
};

/// Ward linkage of the rows of `points` via the nearest-neighbour-chain
/// algorithm. Merges are returned sorted by height (stable, so a merge always
/// follows the merges that built its children).
std::vector<Merge> ward_linkage(const Matrix& points);

/// Flat cluster labels after applying the first points - n_clusters merges.
/// Labels are numbered by first appearance in index order.
std::vector<std::size_t> cut_tree(const std::vector<Merge>& merges, std::size_t points, std::size_t n_clusters);

struct Agglomeration {
  Matrix reduced;                       // m x n_clusters, column c = mean of members
  std::vector<std::size_t> assignment;  // per input column
};

/// Groups the columns of a fully given matrix under Ward's criterion and
/// replaces each group by its mean column. Throws InvalidClusterCount unless
/// 1 <= n_clusters <= r.cols(), and InvalidArgument for missing entries.
Agglomeration feature_agglomeration(const MaskedMatrix& r, std::size_t n_clusters);

}  // namespace stmf
