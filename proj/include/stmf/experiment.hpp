#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stmf/factorize.hpp"
#include "stmf/matrix.hpp"
#include "stmf/metrics.hpp"

namespace stmf {

enum class Method { Stmf, Nmf };
enum class InitStrategy { RandomAcol, Nndsvd, Random };
/// Which pair of matrices the reported dcor compares: the full original
/// against the full prediction, or the held-out values as two columns.
enum class DcorScope { Full, Test };

const char* to_string(Method m);
const char* to_string(InitStrategy s);
const char* to_string(DcorScope s);
std::optional<Method> parse_method(std::string_view name);
std::optional<InitStrategy> parse_init(std::string_view name);
std::optional<DcorScope> parse_dcor_scope(std::string_view name);

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentConfig {
  Method method = Method::Stmf;
  std::size_t rank = 3;
  std::size_t max_iterations = 500;
  std::size_t repetitions = 10;
  double mask_fraction = 0.2;
  OrderingStrategy ordering = OrderingStrategy::MinAsc;
  /// Unset: random_acol for STMF, nndsvd for NMF.
  std::optional<InitStrategy> init;
  std::uint64_t seed = 0;
  /// STMF scan tolerance / NMF relative tolerance.
  std::optional<double> tolerance;
  std::size_t subset_size = 0;
  DcorScope dcor_scope = DcorScope::Full;
  /// Worker threads for repetitions; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  InitStrategy resolved_init() const;
  double resolved_tolerance() const;
  /// Throws InvalidRank / InvalidArgument.
  void validate() const;
};

struct MetricsReport {
  double train_rmse = 0.0;
  double test_rmse = 0.0;
  double dcor = 0.0;  // per the configured scope
  double dcor_full = 0.0;
  double dcor_test = 0.0;
  std::optional<Summary> pearson_rows;
  std::optional<Summary> spearman_rows;
  std::optional<Summary> centered_row_norms;
  std::optional<double> silhouette;
  double final_objective = 0.0;
  std::size_t iterations = 0;
  std::string terminated_by;
  double runtime_seconds = 0.0;
};

struct RepetitionReport {
  std::size_t index = 0;
  std::uint64_t mask_seed = 0;
  std::uint64_t init_seed = 0;
  MetricsReport metrics;
};

struct Aggregate {
  Summary dcor;
  Summary train_rmse;
  Summary test_rmse;
};

struct RunReport {
  ExperimentConfig config;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<RepetitionReport> repetitions;
  Aggregate aggregate;
};

/// Seeds for repetition `rep`: the split and the initialisation come from
/// disjoint streams of base_seed + rep, so the split does not depend on the
/// method.
std::uint64_t repetition_mask_seed(std::uint64_t base_seed, std::size_t rep);
std::uint64_t repetition_init_seed(std::uint64_t base_seed, std::size_t rep);

/// Prediction of a single fit on the training entries.
struct FitOutput {
  Matrix prediction;
  double final_objective = 0.0;
  std::size_t iterations = 0;
  std::string terminated_by;
};
FitOutput fit_method(const MaskedMatrix& train, const ExperimentConfig& config, std::uint64_t init_seed);

/// Metrics of `prediction` against `data` under `split`. Missing entries of
/// `data` are taken from the prediction so that they carry no residual.
MetricsReport evaluate(const MaskedMatrix& data, const Mask& train, const Mask& test, const Matrix& prediction,
                       DcorScope scope, const std::vector<int>* labels);

/// Repeats split -> fit -> evaluate and aggregates. `labels` (one per row)
/// enables the silhouette score of the prediction.
RunReport run_experiment(const MaskedMatrix& data, const ExperimentConfig& config,
                         const std::vector<int>* labels = nullptr);

Aggregate aggregate_repetitions(const std::vector<RepetitionReport>& reps);

nlohmann::json to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::json& j);
/// min/median/max rows for dcor and both RMSEs.
std::string aggregate_csv(const RunReport& report);

struct SweepEntry {
  std::size_t rank = 0;
  double train_rmse = 0.0;  // median over repetitions
  double test_rmse = 0.0;
  double dcor = 0.0;
};

struct SweepReport {
  std::vector<SweepEntry> entries;
  std::size_t selected_rank = 0;
  std::vector<RunReport> runs;
};

/// One run per rank; selects the rank with the lowest median training RMSE,
/// ties to the smaller rank.
SweepReport run_sweep(const MaskedMatrix& data, const ExperimentConfig& config, const std::vector<std::size_t>& ranks);
nlohmann::json to_json(const SweepReport& report);
std::string sweep_csv(const SweepReport& report);

struct OrderingGroup {
  OrderingStrategy strategy = OrderingStrategy::None;
  std::vector<double> dcor;
  double median_dcor = 0.0;
};

struct OrderingReport {
  std::vector<OrderingGroup> groups;
};

/// Same seeds for every strategy, so groups differ only in column order.
OrderingReport run_ordering_study(const MaskedMatrix& data, const ExperimentConfig& config,
                                  const std::vector<OrderingStrategy>& strategies);
nlohmann::json to_json(const OrderingReport& report);
std::string ordering_csv(const OrderingReport& report);

}  // namespace stmf
