#include "stmf/ward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stmf/error.hpp"

namespace stmf {

namespace {

// Upper-triangular storage of a symmetric matrix without its diagonal.
class Condensed {
 public:
  explicit Condensed(std::size_t n) : n_(n), data_(n * (n - 1) / 2, 0.0) {}

  double& at(std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return data_[a * n_ - a * (a + 1) / 2 + (b - a - 1)];
  }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<Merge> ward_linkage(const Matrix& points) {
  const std::size_t n = points.rows();
  std::vector<Merge> merges;
  if (n < 2) return merges;
  merges.reserve(n - 1);

  // Squared Euclidean distances; Ward's Lance-Williams update is exact on them.
  Condensed dist(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      double ss = 0.0;
      for (std::size_t c = 0; c < points.cols(); ++c) {
        const double d = points(a, c) - points(b, c);
        ss += d * d;
      }
      dist.at(a, b) = ss;
    }
  }

  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> chain;
  chain.reserve(n);

  while (merges.size() + 1 < n) {
    if (chain.empty()) {
      chain.push_back(static_cast<std::size_t>(std::find(active.begin(), active.end(), true) - active.begin()));
    }
    std::size_t a = 0, b = 0;
    for (;;) {
      a = chain.back();
      const bool has_prev = chain.size() >= 2;
      std::size_t best = has_prev ? chain[chain.size() - 2] : n;
      double best_d = has_prev ? dist.at(a, best) : std::numeric_limits<double>::infinity();
      // Keeping the previous link on ties guarantees the chain terminates.
      for (std::size_t c = 0; c < n; ++c) {
        if (!active[c] || c == a) continue;
        const double d = dist.at(a, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (has_prev && best == chain[chain.size() - 2]) {
        b = best;
        break;
      }
      chain.push_back(best);
    }
    chain.pop_back();
    chain.pop_back();

    const std::size_t keep = std::min(a, b);
    const std::size_t drop = std::max(a, b);
    const double dab = dist.at(a, b);
    const double na = static_cast<double>(size[a]);
    const double nb = static_cast<double>(size[b]);
    for (std::size_t c = 0; c < n; ++c) {
      if (!active[c] || c == a || c == b) continue;
      const double nc = static_cast<double>(size[c]);
      const double updated = ((na + nc) * dist.at(a, c) + (nb + nc) * dist.at(b, c) - nc * dab) / (na + nb + nc);
      dist.at(keep, c) = std::max(updated, 0.0);
    }
    active[drop] = false;
    size[keep] = size[a] + size[b];
    merges.push_back(Merge{a, b, std::sqrt(std::max(dab, 0.0)), size[keep]});
  }

  std::stable_sort(merges.begin(), merges.end(), [](const Merge& x, const Merge& y) { return x.height < y.height; });
  return merges;
}

std::vector<std::size_t> cut_tree(const std::vector<Merge>& merges, std::size_t points, std::size_t n_clusters) {
  if (n_clusters == 0 || n_clusters > points) {
    throw Error(ErrorKind::InvalidClusterCount, "cluster count must lie in [1, point count]");
  }
  std::vector<std::size_t> parent(points);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const std::size_t steps = points - n_clusters;
  for (std::size_t s = 0; s < steps && s < merges.size(); ++s) {
    const std::size_t ra = find_root(parent, merges[s].left);
    const std::size_t rb = find_root(parent, merges[s].right);
    parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::size_t> label(points);
  std::vector<std::size_t> label_of_root(points, points);
  std::size_t next = 0;
  for (std::size_t p = 0; p < points; ++p) {
    const std::size_t root = find_root(parent, p);
    if (label_of_root[root] == points) label_of_root[root] = next++;
    label[p] = label_of_root[root];
  }
  return label;
}

Agglomeration feature_agglomeration(const MaskedMatrix& r, std::size_t n_clusters) {
  if (n_clusters == 0 || n_clusters > r.cols()) {
    throw Error(ErrorKind::InvalidClusterCount, "cluster count must lie in [1, column count]");
  }
  if (!r.fully_given()) throw Error(ErrorKind::InvalidArgument, "feature agglomeration needs a fully given matrix");

  const auto merges = ward_linkage(r.data().transposed());
  Agglomeration out;
  out.assignment = cut_tree(merges, r.cols(), n_clusters);
  out.reduced = Matrix(r.rows(), n_clusters, 0.0);
  std::vector<std::size_t> members(n_clusters, 0);
  for (std::size_t j = 0; j < r.cols(); ++j) {
    const std::size_t c = out.assignment[j];
    ++members[c];
    for (std::size_t i = 0; i < r.rows(); ++i) out.reduced(i, c) += r(i, j);
  }
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t c = 0; c < n_clusters; ++c) out.reduced(i, c) /= static_cast<double>(members[c]);
  return out;
}

}  // namespace stmf
