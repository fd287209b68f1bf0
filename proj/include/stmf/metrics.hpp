#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stmf/matrix.hpp"

namespace stmf {

/// sqrt(mean of squared residuals) over the entries selected by `selection`.
/// Throws EmptySelection when nothing is selected.
double rmse(const Matrix& reference, const Matrix& approx, const Mask& selection);

/// Sample distance correlation between the rows of x and y (rows are
/// observations). Returns 0 when either distance variance is 0. Throws
/// RowCountMismatch and InvalidArgument for fewer than two rows.
double distance_correlation(const Matrix& x, const Matrix& y);

enum class CorrelationKind { Pearson, Spearman };

/// Per-row correlation of original against approx; std::nullopt marks a row
/// with zero variance on either side.
std::vector<std::optional<double>> row_correlations(const Matrix& original, const Matrix& approx,
                                                    CorrelationKind kind);

double pearson(const std::vector<double>& a, const std::vector<double>& b);
/// 1-based ranks with ties sharing their average rank.
std::vector<double> average_ranks(const std::vector<double>& values);

struct Summary {
  std::size_t count = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Even-length medians average the two central values. Throws EmptySelection
/// for an empty input.
Summary summarize(std::vector<double> values);
/// Summary of the defined entries only.
std::optional<Summary> summarize_defined(const std::vector<std::optional<double>>& values);
double median(std::vector<double> values);

enum class Centering { Global, PerRow };

struct RowNorms {
  std::vector<double> raw;
  std::vector<double> centered;
};

/// Euclidean norm of each row of original - approx, before and after centering
/// each matrix (by its overall mean, or by each row's mean).
RowNorms centered_row_norms(const Matrix& original, const Matrix& approx, Centering centering = Centering::Global);

/// Mean silhouette coefficient with Euclidean distances; members of singleton
/// clusters contribute 0. Throws SingleCluster when fewer than two distinct
/// labels are present.
double silhouette_score(const Matrix& x, const std::vector<int>& labels);
/// Per-sample coefficients behind silhouette_score.
std::vector<double> silhouette_samples(const Matrix& x, const std::vector<int>& labels);

}  // namespace stmf
