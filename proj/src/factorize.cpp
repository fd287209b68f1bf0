#include "stmf/factorize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "stmf/error.hpp"
#include "stmf/random.hpp"
#include "stmf/solver.hpp"
#include "stmf/tropical_ops.hpp"

namespace stmf {

namespace {

constexpr std::array<std::pair<OrderingStrategy, std::string_view>, 8> kOrderingNames{{
    {OrderingStrategy::None, "none"},
    {OrderingStrategy::Random, "random"},
    {OrderingStrategy::MinAsc, "min_asc"},
    {OrderingStrategy::MinDesc, "min_desc"},
    {OrderingStrategy::MaxAsc, "max_asc"},
    {OrderingStrategy::MaxDesc, "max_desc"},
    {OrderingStrategy::MeanAsc, "mean_asc"},
    {OrderingStrategy::MeanDesc, "mean_desc"},
}};

enum class Statistic { Min, Max, Mean };

std::vector<double> column_statistic(const MaskedMatrix& r, Statistic stat) {
  std::vector<double> out(r.cols(), 0.0);
  for (std::size_t j = 0; j < r.cols(); ++j) {
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (!r.given(i, j)) continue;
      const double x = r(i, j);
      if (n == 0) {
        acc = x;
      } else if (stat == Statistic::Min) {
        acc = std::min(acc, x);
      } else if (stat == Statistic::Max) {
        acc = std::max(acc, x);
      } else {
        acc += x;
      }
      ++n;
    }
    if (stat == Statistic::Mean && n > 0) acc /= static_cast<double>(n);
    // Columns with nothing given sort last in ascending order.
    out[j] = n == 0 ? std::numeric_limits<double>::infinity() : acc;
  }
  return out;
}

Permutation sorted_by(const std::vector<double>& key, bool ascending) {
  std::vector<std::size_t> idx(key.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return ascending ? key[a] < key[b] : key[a] > key[b];
  });
  return Permutation(std::move(idx));
}

}  // namespace

const char* to_string(OrderingStrategy s) {
  for (const auto& [value, name] : kOrderingNames)
    if (value == s) return name.data();
  return "unknown";
}

std::optional<OrderingStrategy> parse_ordering(std::string_view name) {
  for (const auto& [value, n] : kOrderingNames)
    if (n == name) return value;
  return std::nullopt;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIterations: return "max_iters";
    case Termination::NoSolutionFound: return "no_solution_found";
  }
  return "unknown";
}

Permutation order_columns(const MaskedMatrix& r, OrderingStrategy strategy, std::uint64_t seed) {
  switch (strategy) {
    case OrderingStrategy::None:
      return Permutation::identity(r.cols());
    case OrderingStrategy::Random: {
      std::vector<std::size_t> idx(r.cols());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      Rng rng(seed);
      std::shuffle(idx.begin(), idx.end(), rng);
      return Permutation(std::move(idx));
    }
    case OrderingStrategy::MinAsc: return sorted_by(column_statistic(r, Statistic::Min), true);
    case OrderingStrategy::MinDesc: return sorted_by(column_statistic(r, Statistic::Min), false);
    case OrderingStrategy::MaxAsc: return sorted_by(column_statistic(r, Statistic::Max), true);
    case OrderingStrategy::MaxDesc: return sorted_by(column_statistic(r, Statistic::Max), false);
    case OrderingStrategy::MeanAsc: return sorted_by(column_statistic(r, Statistic::Mean), true);
    case OrderingStrategy::MeanDesc: return sorted_by(column_statistic(r, Statistic::Mean), false);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown ordering strategy");
}

std::size_t default_subset_size(std::size_t n) { return std::max<std::size_t>(1, (n + 4) / 5); }

Matrix random_acol_init(const MaskedMatrix& r, std::size_t rank, std::size_t subset_size, std::uint64_t seed) {
  if (rank == 0) throw Error(ErrorKind::InvalidRank, "rank must be at least 1");
  if (subset_size == 0 || subset_size > r.cols()) {
    throw Error(ErrorKind::InvalidArgument, "subset size must lie in [1, column count]");
  }
  const double fallback = r.given_mean();
  Rng rng(seed);
  std::vector<std::size_t> columns(r.cols());
  Matrix u(r.rows(), rank);
  for (std::size_t k = 0; k < rank; ++k) {
    std::iota(columns.begin(), columns.end(), std::size_t{0});
    // Partial Fisher-Yates: the first subset_size slots are the sample.
    for (std::size_t s = 0; s < subset_size; ++s) {
      std::uniform_int_distribution<std::size_t> pick(s, columns.size() - 1);
      std::swap(columns[s], columns[pick(rng)]);
    }
    for (std::size_t i = 0; i < r.rows(); ++i) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t s = 0; s < subset_size; ++s) {
        if (r.given(i, columns[s])) {
          sum += r(i, columns[s]);
          ++n;
        }
      }
      u(i, k) = n == 0 ? fallback : sum / static_cast<double>(n);
    }
  }
  return u;
}

UpdateResult ulf(const MaskedMatrix& r, std::size_t i, std::size_t j, const Matrix& u, const Matrix& v,
                 double current_objective) {
  if (!r.given(i, j)) throw Error(ErrorKind::InvalidArgument, "ulf: anchor entry is not given");
  UpdateResult out;
  for (std::size_t k = 0; k < u.cols(); ++k) {
    Matrix u_candidate = u;
    u_candidate(i, k) = r(i, j) - v(k, j);
    out.v = solve_left(u_candidate, r);
    out.u = solve_right(out.v, r);
    out.objective = b_norm_of_product(r, out.u, out.v, current_objective);
    out.component = k;
    if (out.objective < current_objective) {
      out.decreased = true;
      break;
    }
  }
  return out;
}

UpdateResult urf(const MaskedMatrix& r, std::size_t i, std::size_t j, const Matrix& u, const Matrix& v,
                 double current_objective) {
  if (!r.given(i, j)) throw Error(ErrorKind::InvalidArgument, "urf: anchor entry is not given");
  UpdateResult out;
  for (std::size_t k = 0; k < v.rows(); ++k) {
    Matrix v_candidate = v;
    v_candidate(k, j) = r(i, j) - u(i, k);
    out.u = solve_right(v_candidate, r);
    out.v = solve_left(out.u, r);
    out.objective = b_norm_of_product(r, out.u, out.v, current_objective);
    out.component = k;
    if (out.objective < current_objective) {
      out.decreased = true;
      break;
    }
  }
  return out;
}

namespace {

std::vector<Matrix> leave_one_out_max(const Matrix& u, const Matrix& v) {
  const std::size_t m = u.rows();
  const std::size_t n = v.cols();
  const std::size_t rank = u.cols();
  constexpr double kBottom = -std::numeric_limits<double>::infinity();
  std::vector<Matrix> other(rank, Matrix(m, n, kBottom));
  // Prefix maxima fill other[k] with components below k, suffix maxima add the rest.
  Matrix running(m, n, kBottom);
  for (std::size_t k = 0; k < rank; ++k) {
    other[k] = running;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) running(i, j) = std::max(running(i, j), u(i, k) + v(k, j));
  }
  running = Matrix(m, n, kBottom);
  for (std::size_t k = rank; k-- > 0;) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) other[k](i, j) = std::max(other[k](i, j), running(i, j));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) running(i, j) = std::max(running(i, j), u(i, k) + v(k, j));
  }
  return other;
}

// b-norm of max(other, ucol (x) vrow) with the same summation order and early
// stop as b_norm_of_product.
double b_norm_with_component(const MaskedMatrix& r, const Matrix& other, const Matrix& ucol, const Matrix& vrow,
                             double stop_at) {
  double total = 0.0;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    const double a = ucol(i, 0);
    const auto rrow = r.data().row(i);
    const auto orow = other.row(i);
    const auto vr = vrow.row(0);
    for (std::size_t j = 0; j < r.cols(); ++j) {
      if (!r.given(i, j)) continue;
      const double s = a + vr[j];
      total += std::abs(rrow[j] - (s > orow[j] ? s : orow[j]));
    }
    if (total >= stop_at) return total;
  }
  return total;
}

// Raising u(i, k) can only lower the residuals of row i, so row k of
// solve_left for the raised column is the old row capped by row i's residuals.
Matrix lowered_row(const Matrix& v0, std::size_t k, const MaskedMatrix& r, std::size_t i, double raised) {
  Matrix out(1, r.cols());
  for (std::size_t j = 0; j < r.cols(); ++j) {
    const double x = residual(r(i, j), raised);
    out(0, j) = x < v0(k, j) ? x : v0(k, j);
  }
  return out;
}

// Mirror of lowered_row for a raised v(k, j).
Matrix lowered_column(const Matrix& u0, std::size_t k, const MaskedMatrix& r, std::size_t j, double raised) {
  Matrix out(r.rows(), 1);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    const double x = residual(r(i, j), raised);
    out(i, 0) = x < u0(i, k) ? x : u0(i, k);
  }
  return out;
}

Matrix column_of(const Matrix& m, std::size_t k) {
  Matrix out(m.rows(), 1);
  for (std::size_t i = 0; i < m.rows(); ++i) out(i, 0) = m(i, k);
  return out;
}

Matrix row_of(const Matrix& m, std::size_t k) {
  Matrix out(1, m.cols());
  std::copy(m.row(k).begin(), m.row(k).end(), out.row(0).begin());
  return out;
}

}  // namespace

UpdateSearch::UpdateSearch(const MaskedMatrix& r, Matrix u, Matrix v, double objective)
    : r_(r), u_(std::move(u)), v_(std::move(v)), objective_(objective) {}

void UpdateSearch::prepare(Side& side, bool left_side) {
  if (side.ready) return;
  if (left_side) {
    side.v0 = solve_left(u_, r_);
    side.v = side.v0;
    side.u = solve_right(side.v, r_);
  } else {
    side.u0 = solve_right(v_, r_);
    side.u = side.u0;
    side.v = solve_left(side.u, r_);
  }
  side.other = leave_one_out_max(side.u, side.v);
  side.ready = true;
}

UpdateResult UpdateSearch::left(std::size_t i, std::size_t j) {
  if (!r_.given(i, j)) throw Error(ErrorKind::InvalidArgument, "ulf: anchor entry is not given");
  prepare(left_, true);
  UpdateResult out;
  for (std::size_t k = 0; k < u_.cols(); ++k) {
    Matrix ucol = column_of(u_, k);
    ucol(i, 0) = r_(i, j) - v_(k, j);
    const Matrix vrow = ucol(i, 0) >= u_(i, k) ? lowered_row(left_.v0, k, r_, i, ucol(i, 0)) : solve_left(ucol, r_);
    const Matrix ucol2 = solve_right(vrow, r_);
    out.component = k;
    out.objective = b_norm_with_component(r_, left_.other[k], ucol2, vrow, objective_);
    if (out.objective < objective_) {
      out.decreased = true;
      out.u = left_.u;
      out.v = left_.v;
      for (std::size_t a = 0; a < out.u.rows(); ++a) out.u(a, k) = ucol2(a, 0);
      std::copy(vrow.row(0).begin(), vrow.row(0).end(), out.v.row(k).begin());
      break;
    }
  }
  return out;
}

UpdateResult UpdateSearch::right(std::size_t i, std::size_t j) {
  if (!r_.given(i, j)) throw Error(ErrorKind::InvalidArgument, "urf: anchor entry is not given");
  prepare(right_, false);
  UpdateResult out;
  for (std::size_t k = 0; k < v_.rows(); ++k) {
    Matrix vrow = row_of(v_, k);
    vrow(0, j) = r_(i, j) - u_(i, k);
    const Matrix ucol = vrow(0, j) >= v_(k, j) ? lowered_column(right_.u0, k, r_, j, vrow(0, j)) : solve_right(vrow, r_);
    const Matrix vrow2 = solve_left(ucol, r_);
    out.component = k;
    out.objective = b_norm_with_component(r_, right_.other[k], ucol, vrow2, objective_);
    if (out.objective < objective_) {
      out.decreased = true;
      out.u = right_.u;
      out.v = right_.v;
      for (std::size_t a = 0; a < out.u.rows(); ++a) out.u(a, k) = ucol(a, 0);
      std::copy(vrow2.row(0).begin(), vrow2.row(0).end(), out.v.row(k).begin());
      break;
    }
  }
  return out;
}

void UpdateSearch::accept(UpdateResult result) {
  if (!result.decreased) throw Error(ErrorKind::InvalidArgument, "only a decreasing update can be accepted");
  u_ = std::move(result.u);
  v_ = std::move(result.v);
  objective_ = result.objective;
  left_.ready = false;
  right_.ready = false;
}

StmfResult fit_stmf(const MaskedMatrix& r, const StmfOptions& options) {
  if (options.rank == 0) throw Error(ErrorKind::InvalidRank, "rank must be at least 1");
  if (options.max_iterations == 0) throw Error(ErrorKind::InvalidArgument, "max_iterations must be at least 1");
  if (!r.has_full_coverage()) {
    throw Error(ErrorKind::EmptyMinimum, "every row and column needs at least one given entry");
  }

  StmfResult result;
  const Permutation perm = order_columns(r, options.ordering, mix_seed(options.seed, streams::kOrdering));
  const MaskedMatrix rp = permute_columns(r, perm);
  const std::size_t subset = options.subset_size == 0 ? default_subset_size(r.cols()) : options.subset_size;

  Matrix u = random_acol_init(rp, options.rank, subset, mix_seed(options.seed, streams::kInit));
  Matrix v = solve_left(u, rp);
  double objective = b_norm_of_product(rp, u, v);

  FitTrace& trace = result.trace;
  trace.objective_per_accept.push_back(objective);
  if (options.on_accept) options.on_accept(rp, u, v, objective);

  std::vector<std::pair<std::size_t, std::size_t>> entries;
  entries.reserve(rp.given_count());
  for (std::size_t i = 0; i < rp.rows(); ++i)
    for (std::size_t j = 0; j < rp.cols(); ++j)
      if (rp.given(i, j)) entries.emplace_back(i, j);

  const bool left_first = options.update_order == UpdateOrder::LeftFirst;
  UpdateSearch search(rp, std::move(u), std::move(v), objective);

  // The entry cursor persists across outer iterations: each iteration resumes
  // after the entry that produced the last accepted update. A scan is one
  // full cycle over the given entries.
  std::size_t cursor = 0;
  std::size_t visits_in_scan = 0;
  double scan_start_objective = objective;
  trace.terminated_by = objective < options.tolerance ? Termination::Converged : Termination::MaxIterations;

  while (trace.terminated_by == Termination::MaxIterations && trace.iterations_run < options.max_iterations) {
    ++trace.iterations_run;
    UpdateResult candidate;
    for (std::size_t t = 0; t < entries.size(); ++t) {
      const auto [i, j] = entries[cursor];
      cursor = (cursor + 1) % entries.size();
      ++visits_in_scan;
      candidate = left_first ? search.left(i, j) : search.right(i, j);
      if (candidate.decreased) break;
      candidate = left_first ? search.right(i, j) : search.left(i, j);
      if (candidate.decreased) break;
    }
    if (!candidate.decreased) {
      trace.terminated_by = Termination::NoSolutionFound;
      break;
    }
    search.accept(std::move(candidate));
    objective = search.objective();
    trace.objective_per_accept.push_back(objective);
    if (options.on_accept) options.on_accept(rp, search.u(), search.v(), objective);

    // No later scan can improve by more than the remaining objective.
    if (objective < options.tolerance) {
      trace.terminated_by = Termination::Converged;
    } else if (visits_in_scan >= entries.size()) {
      if (scan_start_objective - objective < options.tolerance) trace.terminated_by = Termination::Converged;
      visits_in_scan = 0;
      scan_start_objective = objective;
    }
  }

  u = search.u();
  v = search.v();
  result.factors.u = std::move(u);
  result.factors.v = apply_inverse_to_columns(v, perm);
  result.factors.column_permutation = perm;
  return result;
}

Matrix predict(const Factorization& f) { return trop_matmul(f.u, f.v); }

std::vector<Matrix> latent_matrices(const Factorization& f) {
  std::vector<Matrix> out;
  out.reserve(f.rank());
  for (std::size_t k = 0; k < f.rank(); ++k) {
    Matrix latent(f.u.rows(), f.v.cols());
    for (std::size_t a = 0; a < latent.rows(); ++a)
      for (std::size_t b = 0; b < latent.cols(); ++b) latent(a, b) = f.u(a, k) + f.v(k, b);
    out.push_back(std::move(latent));
  }
  return out;
}

std::vector<std::size_t> dominant_components(const Factorization& f) {
  std::vector<std::size_t> out(f.u.rows() * f.v.cols(), 0);
  for (std::size_t a = 0; a < f.u.rows(); ++a) {
    for (std::size_t b = 0; b < f.v.cols(); ++b) {
      std::size_t arg = 0;
      double best = f.u(a, 0) + f.v(0, b);
      for (std::size_t k = 1; k < f.rank(); ++k) {
        const double s = f.u(a, k) + f.v(k, b);
        if (s > best) {
          best = s;
          arg = k;
        }
      }
      out[a * f.v.cols() + b] = arg;
    }
  }
  return out;
}

}  // namespace stmf
