#include "stmf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "stmf/datagen.hpp"
#include "stmf/error.hpp"
#include "stmf/nmf.hpp"
#include "stmf/random.hpp"

namespace stmf {

using nlohmann::json;

const char* to_string(Method m) { return m == Method::Stmf ? "stmf" : "nmf"; }

const char* to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::RandomAcol: return "random_acol";
    case InitStrategy::Nndsvd: return "nndsvd";
    case InitStrategy::Random: return "random";
  }
  return "unknown";
}

const char* to_string(DcorScope s) { return s == DcorScope::Full ? "full" : "test"; }

std::optional<Method> parse_method(std::string_view name) {
  if (name == "stmf") return Method::Stmf;
  if (name == "nmf") return Method::Nmf;
  return std::nullopt;
}

std::optional<InitStrategy> parse_init(std::string_view name) {
  if (name == "random_acol") return InitStrategy::RandomAcol;
  if (name == "nndsvd") return InitStrategy::Nndsvd;
  if (name == "random") return InitStrategy::Random;
  return std::nullopt;
}

std::optional<DcorScope> parse_dcor_scope(std::string_view name) {
  if (name == "full") return DcorScope::Full;
  if (name == "test") return DcorScope::Test;
  return std::nullopt;
}

InitStrategy ExperimentConfig::resolved_init() const {
  if (init) return *init;
  return method == Method::Stmf ? InitStrategy::RandomAcol : InitStrategy::Nndsvd;
}

double ExperimentConfig::resolved_tolerance() const {
  if (tolerance) return *tolerance;
  return method == Method::Stmf ? 1e-10 : 1e-9;
}

void ExperimentConfig::validate() const {
  if (rank == 0) throw Error(ErrorKind::InvalidRank, "rank must be at least 1");
  if (repetitions == 0) throw Error(ErrorKind::InvalidArgument, "repetitions must be at least 1");
  if (max_iterations == 0) throw Error(ErrorKind::InvalidArgument, "iterations must be at least 1");
  if (!(mask_fraction > 0.0 && mask_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "mask fraction must lie in (0, 1)");
  }
  if (!(resolved_tolerance() >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be nonnegative");
  const InitStrategy i = resolved_init();
  if (method == Method::Stmf && i != InitStrategy::RandomAcol) {
    throw Error(ErrorKind::InvalidArgument, "STMF supports only random_acol initialisation");
  }
  if (method == Method::Nmf && i == InitStrategy::RandomAcol) {
    throw Error(ErrorKind::InvalidArgument, "NMF supports nndsvd or random initialisation");
  }
}

std::uint64_t repetition_mask_seed(std::uint64_t base_seed, std::size_t rep) {
  return mix_seed(base_seed + rep, streams::kMask);
}

std::uint64_t repetition_init_seed(std::uint64_t base_seed, std::size_t rep) {
  return mix_seed(base_seed + rep, streams::kInit);
}

FitOutput fit_method(const MaskedMatrix& train, const ExperimentConfig& config, std::uint64_t init_seed) {
  FitOutput out;
  if (config.method == Method::Stmf) {
    StmfOptions opts;
    opts.rank = config.rank;
    opts.max_iterations = config.max_iterations;
    opts.ordering = config.ordering;
    opts.subset_size = config.subset_size;
    opts.seed = init_seed;
    opts.tolerance = config.resolved_tolerance();
    const StmfResult res = fit_stmf(train, opts);
    out.prediction = predict(res.factors);
    out.final_objective = res.trace.objective_per_accept.back();
    out.iterations = res.trace.iterations_run;
    out.terminated_by = to_string(res.trace.terminated_by);
  } else {
    NmfOptions opts;
    opts.rank = config.rank;
    opts.max_iterations = config.max_iterations;
    opts.seed = init_seed;
    opts.init = config.resolved_init() == InitStrategy::Random ? NmfInit::Random : NmfInit::Nndsvd;
    opts.relative_tolerance = config.resolved_tolerance();
    const NmfResult res = nmf_fit(train, opts);
    out.prediction = nmf_predict(res.factors);
    out.final_objective = res.trace.objective.back();
    out.iterations = res.trace.iterations_run;
    out.terminated_by = res.trace.iterations_run < config.max_iterations ? "converged" : "max_iters";
  }
  return out;
}

MetricsReport evaluate(const MaskedMatrix& data, const Mask& train, const Mask& test, const Matrix& prediction,
                       DcorScope scope, const std::vector<int>* labels) {
  Matrix reference = data.data();
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < data.cols(); ++j)
      if (!data.given(i, j)) reference(i, j) = prediction(i, j);

  MetricsReport m;
  m.train_rmse = rmse(reference, prediction, train);
  m.test_rmse = rmse(reference, prediction, test);
  m.dcor_full = distance_correlation(reference, prediction);

  std::vector<double> held_out_truth, held_out_pred;
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < data.cols(); ++j)
      if (test(i, j)) {
        held_out_truth.push_back(reference(i, j));
        held_out_pred.push_back(prediction(i, j));
      }
  if (held_out_truth.size() >= 2) {
    Matrix a(held_out_truth.size(), 1), b(held_out_pred.size(), 1);
    for (std::size_t k = 0; k < held_out_truth.size(); ++k) {
      a(k, 0) = held_out_truth[k];
      b(k, 0) = held_out_pred[k];
    }
    m.dcor_test = distance_correlation(a, b);
  }
  m.dcor = scope == DcorScope::Full ? m.dcor_full : m.dcor_test;

  m.pearson_rows = summarize_defined(row_correlations(reference, prediction, CorrelationKind::Pearson));
  m.spearman_rows = summarize_defined(row_correlations(reference, prediction, CorrelationKind::Spearman));
  if (reference.rows() > 0) m.centered_row_norms = summarize(centered_row_norms(reference, prediction).centered);
  if (labels) m.silhouette = silhouette_score(prediction, *labels);
  return m;
}

Aggregate aggregate_repetitions(const std::vector<RepetitionReport>& reps) {
  std::vector<double> dcor, train, test;
  for (const auto& r : reps) {
    dcor.push_back(r.metrics.dcor);
    train.push_back(r.metrics.train_rmse);
    test.push_back(r.metrics.test_rmse);
  }
  return Aggregate{summarize(dcor), summarize(train), summarize(test)};
}

RunReport run_experiment(const MaskedMatrix& data, const ExperimentConfig& config, const std::vector<int>* labels) {
  config.validate();
  if (labels && labels->size() != data.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "one label per row is required");
  }
  RunReport report;
  report.config = config;
  report.rows = data.rows();
  report.cols = data.cols();
  report.repetitions.resize(config.repetitions);

  auto run_one = [&](std::size_t rep) {
    const auto start = std::chrono::steady_clock::now();
    RepetitionReport& out = report.repetitions[rep];
    out.index = rep;
    out.mask_seed = repetition_mask_seed(config.seed, rep);
    out.init_seed = repetition_init_seed(config.seed, rep);
    const MaskSplit split = mask_split(data, config.mask_fraction, out.mask_seed);
    const MaskedMatrix train = data.restricted_to(split.train);
    const FitOutput fit = fit_method(train, config, out.init_seed);
    out.metrics = evaluate(data, split.train, split.test, fit.prediction, config.dcor_scope, labels);
    out.metrics.final_objective = fit.final_objective;
    out.metrics.iterations = fit.iterations;
    out.metrics.terminated_by = fit.terminated_by;
    out.metrics.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  std::size_t workers = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  workers = std::clamp<std::size_t>(workers, 1, config.repetitions);
  if (workers == 1) {
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) run_one(rep);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t rep = next++; rep < config.repetitions; rep = next++) {
          try {
            run_one(rep);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  report.aggregate = aggregate_repetitions(report.repetitions);
  return report;
}

// JSON -----------------------------------------------------------------------

namespace {

json summary_json(const Summary& s) {
  return {{"count", s.count}, {"min", s.min}, {"median", s.median}, {"max", s.max}, {"mean", s.mean}};
}

Summary summary_from(const json& j) {
  return Summary{j.at("count").get<std::size_t>(), j.at("min").get<double>(), j.at("median").get<double>(),
                 j.at("max").get<double>(), j.at("mean").get<double>()};
}

json optional_summary_json(const std::optional<Summary>& s) { return s ? summary_json(*s) : json(nullptr); }

std::optional<Summary> optional_summary_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return summary_from(j);
}

json config_json(const ExperimentConfig& c) {
  return {{"method", to_string(c.method)},
          {"rank", c.rank},
          {"max_iterations", c.max_iterations},
          {"repetitions", c.repetitions},
          {"mask_fraction", c.mask_fraction},
          {"ordering", to_string(c.ordering)},
          {"init", to_string(c.resolved_init())},
          {"seed", c.seed},
          {"tolerance", c.resolved_tolerance()},
          {"subset_size", c.subset_size},
          {"dcor_scope", to_string(c.dcor_scope)}};
}

template <typename T, typename Parse>
T parse_enum(const json& j, const char* key, Parse parse) {
  const auto name = j.at(key).get<std::string>();
  const auto value = parse(name);
  if (!value) throw Error(ErrorKind::ParseError, std::string("unknown ") + key + " '" + name + "'");
  return *value;
}

ExperimentConfig config_from(const json& j) {
  ExperimentConfig c;
  c.method = parse_enum<Method>(j, "method", parse_method);
  c.rank = j.at("rank").get<std::size_t>();
  c.max_iterations = j.at("max_iterations").get<std::size_t>();
  c.repetitions = j.at("repetitions").get<std::size_t>();
  c.mask_fraction = j.at("mask_fraction").get<double>();
  c.ordering = parse_enum<OrderingStrategy>(j, "ordering", parse_ordering);
  c.init = parse_enum<InitStrategy>(j, "init", parse_init);
  c.seed = j.at("seed").get<std::uint64_t>();
  c.tolerance = j.at("tolerance").get<double>();
  c.subset_size = j.at("subset_size").get<std::size_t>();
  c.dcor_scope = parse_enum<DcorScope>(j, "dcor_scope", parse_dcor_scope);
  return c;
}

json metrics_json(const MetricsReport& m) {
  return {{"train_rmse", m.train_rmse},
          {"test_rmse", m.test_rmse},
          {"dcor", m.dcor},
          {"dcor_full", m.dcor_full},
          {"dcor_test", m.dcor_test},
          {"pearson_rows", optional_summary_json(m.pearson_rows)},
          {"spearman_rows", optional_summary_json(m.spearman_rows)},
          {"centered_row_norms", optional_summary_json(m.centered_row_norms)},
          {"silhouette", m.silhouette ? json(*m.silhouette) : json(nullptr)},
          {"final_objective", m.final_objective},
          {"iterations", m.iterations},
          {"terminated_by", m.terminated_by},
          {"runtime_seconds", m.runtime_seconds}};
}

MetricsReport metrics_from(const json& j) {
  MetricsReport m;
  m.train_rmse = j.at("train_rmse").get<double>();
  m.test_rmse = j.at("test_rmse").get<double>();
  m.dcor = j.at("dcor").get<double>();
  m.dcor_full = j.at("dcor_full").get<double>();
  m.dcor_test = j.at("dcor_test").get<double>();
  m.pearson_rows = optional_summary_from(j.at("pearson_rows"));
  m.spearman_rows = optional_summary_from(j.at("spearman_rows"));
  m.centered_row_norms = optional_summary_from(j.at("centered_row_norms"));
  if (!j.at("silhouette").is_null()) m.silhouette = j.at("silhouette").get<double>();
  m.final_objective = j.at("final_objective").get<double>();
  m.iterations = j.at("iterations").get<std::size_t>();
  m.terminated_by = j.at("terminated_by").get<std::string>();
  m.runtime_seconds = j.at("runtime_seconds").get<double>();
  return m;
}

std::string format_double(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

}  // namespace

json to_json(const RunReport& report) {
  json reps = json::array();
  for (const auto& r : report.repetitions) {
    reps.push_back({{"index", r.index},
                    {"mask_seed", r.mask_seed},
                    {"init_seed", r.init_seed},
                    {"metrics", metrics_json(r.metrics)}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "run"},
          {"config", config_json(report.config)},
          {"input", {{"rows", report.rows}, {"cols", report.cols}}},
          {"repetitions", std::move(reps)},
          {"aggregate",
           {{"dcor", summary_json(report.aggregate.dcor)},
            {"train_rmse", summary_json(report.aggregate.train_rmse)},
            {"test_rmse", summary_json(report.aggregate.test_rmse)}}}};
}

RunReport run_report_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw Error(ErrorKind::ParseError, "unsupported report schema version");
    }
    RunReport r;
    r.config = config_from(j.at("config"));
    r.rows = j.at("input").at("rows").get<std::size_t>();
    r.cols = j.at("input").at("cols").get<std::size_t>();
    for (const auto& rep : j.at("repetitions")) {
      r.repetitions.push_back(RepetitionReport{rep.at("index").get<std::size_t>(),
                                               rep.at("mask_seed").get<std::uint64_t>(),
                                               rep.at("init_seed").get<std::uint64_t>(), metrics_from(rep.at("metrics"))});
    }
    const auto& agg = j.at("aggregate");
    r.aggregate = Aggregate{summary_from(agg.at("dcor")), summary_from(agg.at("train_rmse")),
                            summary_from(agg.at("test_rmse"))};
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("run report: ") + e.what());
  }
}

std::string aggregate_csv(const RunReport& report) {
  std::ostringstream out;
  out << "statistic,dcor,train_rmse,test_rmse\n";
  const auto& a = report.aggregate;
  out << "min," << format_double(a.dcor.min) << ',' << format_double(a.train_rmse.min) << ','
      << format_double(a.test_rmse.min) << '\n';
  out << "median," << format_double(a.dcor.median) << ',' << format_double(a.train_rmse.median) << ','
      << format_double(a.test_rmse.median) << '\n';
  out << "max," << format_double(a.dcor.max) << ',' << format_double(a.train_rmse.max) << ','
      << format_double(a.test_rmse.max) << '\n';
  return out.str();
}

SweepReport run_sweep(const MaskedMatrix& data, const ExperimentConfig& config, const std::vector<std::size_t>& ranks) {
  if (ranks.empty()) throw Error(ErrorKind::InvalidArgument, "sweep needs at least one rank");
  SweepReport report;
  for (std::size_t rank : ranks) {
    ExperimentConfig c = config;
    c.rank = rank;
    RunReport run = run_experiment(data, c);
    report.entries.push_back(SweepEntry{rank, run.aggregate.train_rmse.median, run.aggregate.test_rmse.median,
                                        run.aggregate.dcor.median});
    report.runs.push_back(std::move(run));
  }
  const SweepEntry* best = &report.entries.front();
  for (const auto& e : report.entries) {
    if (e.train_rmse < best->train_rmse || (e.train_rmse == best->train_rmse && e.rank < best->rank)) best = &e;
  }
  report.selected_rank = best->rank;
  return report;
}

json to_json(const SweepReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"rank", e.rank},
                       {"median_train_rmse", e.train_rmse},
                       {"median_test_rmse", e.test_rmse},
                       {"median_dcor", e.dcor},
                       {"selected", e.rank == report.selected_rank}});
  }
  json runs = json::array();
  for (const auto& r : report.runs) runs.push_back(to_json(r));
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "sweep"},
          {"selected_rank", report.selected_rank},
          {"ranks", std::move(entries)},
          {"runs", std::move(runs)}};
}

std::string sweep_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "rank,median_train_rmse,median_test_rmse,median_dcor,selected\n";
  for (const auto& e : report.entries) {
    out << e.rank << ',' << format_double(e.train_rmse) << ',' << format_double(e.test_rmse) << ','
        << format_double(e.dcor) << ',' << (e.rank == report.selected_rank ? 1 : 0) << '\n';
  }
  return out.str();
}

OrderingReport run_ordering_study(const MaskedMatrix& data, const ExperimentConfig& config,
                                  const std::vector<OrderingStrategy>& strategies) {
  if (strategies.empty()) throw Error(ErrorKind::InvalidArgument, "ordering study needs at least one strategy");
  if (config.method != Method::Stmf) throw Error(ErrorKind::InvalidArgument, "ordering study applies to STMF only");
  OrderingReport report;
  for (OrderingStrategy s : strategies) {
    ExperimentConfig c = config;
    c.ordering = s;
    const RunReport run = run_experiment(data, c);
    OrderingGroup g{s, {}, run.aggregate.dcor.median};
    for (const auto& rep : run.repetitions) g.dcor.push_back(rep.metrics.dcor);
    report.groups.push_back(std::move(g));
  }
  return report;
}

json to_json(const OrderingReport& report) {
  json groups = json::array();
  for (const auto& g : report.groups) {
    groups.push_back({{"strategy", to_string(g.strategy)}, {"dcor", g.dcor}, {"median_dcor", g.median_dcor}});
  }
  return {{"schema_version", kReportSchemaVersion}, {"kind", "ordering"}, {"groups", std::move(groups)}};
}

std::string ordering_csv(const OrderingReport& report) {
  std::ostringstream out;
  out << "strategy,repetition,dcor\n";
  for (const auto& g : report.groups)
    for (std::size_t r = 0; r < g.dcor.size(); ++r) out << to_string(g.strategy) << ',' << r << ',' << format_double(g.dcor[r]) << '\n';
  return out.str();
}

}  // namespace stmf
