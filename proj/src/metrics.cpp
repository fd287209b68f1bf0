#include "stmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "stmf/error.hpp"

namespace stmf {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": shapes differ");
  }
}

// Pairwise Euclidean distances between rows, double-centred.
std::vector<double> centred_distances(const Matrix& x) {
  const std::size_t n = x.rows();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      double ss = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double diff = x(a, c) - x(b, c);
        ss += diff * diff;
      }
      d[a * n + b] = d[b * n + a] = std::sqrt(ss);
    }
  }
  // The matrix is symmetric, so row means double as column means.
  std::vector<double> mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) mean[a] += d[a * n + b];
    grand += mean[a];
    mean[a] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) d[a * n + b] += grand - mean[a] - mean[b];
  return d;
}

double mean_product(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s / static_cast<double>(a.size());
}

}  // namespace

double rmse(const Matrix& reference, const Matrix& approx, const Mask& selection) {
  require_same_shape(reference, approx, "rmse");
  if (selection.rows() != reference.rows() || selection.cols() != reference.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "rmse: selection shape differs");
  }
  double ss = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < reference.rows(); ++i)
    for (std::size_t j = 0; j < reference.cols(); ++j)
      if (selection(i, j)) {
        const double d = reference(i, j) - approx(i, j);
        ss += d * d;
        ++n;
      }
  if (n == 0) throw Error(ErrorKind::EmptySelection, "rmse: no entries selected");
  return std::sqrt(ss / static_cast<double>(n));
}

double distance_correlation(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows()) throw Error(ErrorKind::RowCountMismatch, "distance_correlation: row counts differ");
  if (x.rows() < 2) throw Error(ErrorKind::InvalidArgument, "distance_correlation: need at least two rows");
  const auto a = centred_distances(x);
  const auto b = centred_distances(y);
  const double vxy = mean_product(a, b);
  const double vx = mean_product(a, a);
  const double vy = mean_product(b, b);
  const double denom = std::sqrt(vx * vy);
  if (!(denom > 0.0)) return 0.0;
  const double ratio = std::max(vxy, 0.0) / denom;
  return std::min(std::sqrt(ratio), 1.0);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "pearson: lengths differ");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double da = a[k] - ma, db = b[k] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nan("");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size());
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && values[order[end]] == values[order[start]]) ++end;
    // Positions start..end-1 hold equal values; ranks are 1-based.
    const double avg = 0.5 * static_cast<double>(start + end + 1);
    for (std::size_t p = start; p < end; ++p) ranks[order[p]] = avg;
    start = end;
  }
  return ranks;
}

std::vector<std::optional<double>> row_correlations(const Matrix& original, const Matrix& approx,
                                                    CorrelationKind kind) {
  require_same_shape(original, approx, "row_correlations");
  std::vector<std::optional<double>> out(original.rows());
  for (std::size_t i = 0; i < original.rows(); ++i) {
    std::vector<double> a(original.row(i).begin(), original.row(i).end());
    std::vector<double> b(approx.row(i).begin(), approx.row(i).end());
    if (kind == CorrelationKind::Spearman) {
      a = average_ranks(a);
      b = average_ranks(b);
    }
    const double c = pearson(a, b);
    if (!std::isnan(c)) out[i] = c;
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptySelection, "median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Summary summarize(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptySelection, "summary of an empty sample");
  Summary s;
  s.count = values.size();
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.median = median(std::move(values));
  return s;
}

std::optional<Summary> summarize_defined(const std::vector<std::optional<double>>& values) {
  std::vector<double> defined;
  for (const auto& v : values)
    if (v) defined.push_back(*v);
  if (defined.empty()) return std::nullopt;
  return summarize(std::move(defined));
}

RowNorms centered_row_norms(const Matrix& original, const Matrix& approx, Centering centering) {
  require_same_shape(original, approx, "centered_row_norms");
  const std::size_t m = original.rows();
  const std::size_t n = original.cols();
  RowNorms out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};

  auto centres = [&](const Matrix& x) {
    std::vector<double> c(m, 0.0);
    if (n == 0) return c;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double row_sum = 0.0;
      for (double v : x.row(i)) row_sum += v;
      c[i] = row_sum / static_cast<double>(n);
      total += row_sum;
    }
    if (centering == Centering::Global) std::fill(c.begin(), c.end(), total / static_cast<double>(m * n));
    return c;
  };
  const auto co = centres(original);
  const auto ca = centres(approx);

  for (std::size_t i = 0; i < m; ++i) {
    double raw = 0.0, cen = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = original(i, j) - approx(i, j);
      const double dc = (original(i, j) - co[i]) - (approx(i, j) - ca[i]);
      raw += d * d;
      cen += dc * dc;
    }
    out.raw[i] = std::sqrt(raw);
    out.centered[i] = std::sqrt(cen);
  }
  return out;
}

std::vector<double> silhouette_samples(const Matrix& x, const std::vector<int>& labels) {
  if (labels.size() != x.rows()) throw Error(ErrorKind::DimensionMismatch, "silhouette: one label per row required");
  std::map<int, std::size_t> sizes;
  for (int l : labels) ++sizes[l];
  if (sizes.size() < 2) throw Error(ErrorKind::SingleCluster, "silhouette needs at least two clusters");

  const std::size_t n = x.rows();
  std::vector<double> out(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    if (sizes[labels[a]] == 1) continue;
    std::map<int, double> sum;
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      double ss = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double d = x(a, c) - x(b, c);
        ss += d * d;
      }
      sum[labels[b]] += std::sqrt(ss);
    }
    const double within = sum[labels[a]] / static_cast<double>(sizes[labels[a]] - 1);
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& [label, size] : sizes) {
      if (label == labels[a]) continue;
      nearest = std::min(nearest, sum[label] / static_cast<double>(size));
    }
    const double denom = std::max(within, nearest);
    out[a] = denom > 0.0 ? (nearest - within) / denom : 0.0;
  }
  return out;
}

double silhouette_score(const Matrix& x, const std::vector<int>& labels) {
  const auto s = silhouette_samples(x, labels);
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

}  // namespace stmf
