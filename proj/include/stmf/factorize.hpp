#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "stmf/matrix.hpp"

namespace stmf {

enum class OrderingStrategy { None, Random, MinAsc, MinDesc, MaxAsc, MaxDesc, MeanAsc, MeanDesc };

const char* to_string(OrderingStrategy s);
std::optional<OrderingStrategy> parse_ordering(std::string_view name);

/// Column order for the factorisation. Statistics are taken over given
/// entries only; ties keep the original column order. `seed` is used only by
/// OrderingStrategy::Random.
Permutation order_columns(const MaskedMatrix& r, OrderingStrategy strategy, std::uint64_t seed = 0);

/// max(1, ceil(n / 5)).
std::size_t default_subset_size(std::size_t n);

/// Random Acol: each column of the m x rank result is the row-wise mean of
/// the given entries of `subset_size` distinct, randomly chosen columns of r.
/// A row with nothing given across the chosen columns gets the global mean.
Matrix random_acol_init(const MaskedMatrix& r, std::size_t rank, std::size_t subset_size, std::uint64_t seed);

struct UpdateResult {
  Matrix u;
  Matrix v;
  double objective = 0.0;
  bool decreased = false;
  /// Component k that produced the returned candidate.
  std::size_t component = 0;
};

/// One left-factor update anchored at the given entry (i, j): for each
/// component k in order, pin u(i, k) so that u(i, k) + v(k, j) = r(i, j),
/// re-solve V then U, and stop at the first k whose b-norm beats
/// `current_objective`.
UpdateResult ulf(const MaskedMatrix& r, std::size_t i, std::size_t j, const Matrix& u, const Matrix& v,
                 double current_objective);

/// Mirror of ulf that pins v(k, j), re-solves U then V.
UpdateResult urf(const MaskedMatrix& r, std::size_t i, std::size_t j, const Matrix& u, const Matrix& v,
                 double current_objective);

/// ulf and urf evaluated against one fixed current state (u, v). Pinning
/// component k only changes row k of the re-solved V (column k of U for urf),
/// so everything else is solved once per state and reused by every attempt.
/// Whenever an update decreases the objective the result is bit-identical to
/// ulf/urf; otherwise only `decreased` and `component` are filled in.
class UpdateSearch {
 public:
  UpdateSearch(const MaskedMatrix& r, Matrix u, Matrix v, double objective);

  UpdateResult left(std::size_t i, std::size_t j);
  UpdateResult right(std::size_t i, std::size_t j);
  /// Makes a decreasing result the new current state.
  void accept(UpdateResult result);

  const Matrix& u() const noexcept { return u_; }
  const Matrix& v() const noexcept { return v_; }
  double objective() const noexcept { return objective_; }

 private:
  struct Side {
    bool ready = false;
    Matrix u0;                  // solve_right(v) for the right side
    Matrix v0;                  // solve_left(u) for the left side
    Matrix u;                   // unchanged columns of the candidate U
    Matrix v;                   // unchanged rows of the candidate V
    std::vector<Matrix> other;  // other[k](i, j) = max over k' != k of u(i, k') + v(k', j)
  };
  void prepare(Side& side, bool left_side);

  const MaskedMatrix& r_;
  Matrix u_;
  Matrix v_;
  double objective_;
  Side left_;
  Side right_;
};

enum class UpdateOrder { LeftFirst, RightFirst };

enum class Termination { Converged, MaxIterations, NoSolutionFound };
const char* to_string(Termination t);

struct StmfOptions {
  std::size_t rank = 1;
  /// Outer iterations; each performs at most one accepted update.
  std::size_t max_iterations = 500;
  OrderingStrategy ordering = OrderingStrategy::MinAsc;
  /// 0 selects default_subset_size(n).
  std::size_t subset_size = 0;
  std::uint64_t seed = 0;
  /// The fit converges once a full scan of the given entries lowers the
  /// objective by less than this, or the objective itself falls below it.
  double tolerance = 1e-10;
  UpdateOrder update_order = UpdateOrder::LeftFirst;
  /// Called with the column-permuted data and the new factors after the
  /// initial solve and after every accepted update.
  std::function<void(const MaskedMatrix& permuted, const Matrix& u, const Matrix& v, double objective)> on_accept;
};

struct Factorization {
  Matrix u;  // m x r
  Matrix v;  // r x n, original column order
  Permutation column_permutation;

  std::size_t rank() const noexcept { return u.cols(); }
};

struct FitTrace {
  /// Objective after initialisation followed by one value per accepted update.
  std::vector<double> objective_per_accept;
  std::size_t iterations_run = 0;
  Termination terminated_by = Termination::MaxIterations;
};

struct StmfResult {
  Factorization factors;
  FitTrace trace;
};

/// Sparse tropical matrix factorisation of r. Throws InvalidRank for rank 0
/// and EmptyMinimum when some row or column of r has no given entry.
StmfResult fit_stmf(const MaskedMatrix& r, const StmfOptions& options);

/// u (x) v.
Matrix predict(const Factorization& f);

/// R^(k)(a, b) = u(a, k) + v(k, b), one matrix per component. Their entrywise
/// maximum is predict(f).
std::vector<Matrix> latent_matrices(const Factorization& f);

/// Index of the component attaining the maximum at each entry (row-major,
/// ties to the smallest index).
std::vector<std::size_t> dominant_components(const Factorization& f);

}  // namespace stmf
