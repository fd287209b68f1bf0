// Command-line harness: synthetic data generation, repeated masked fits,
// rank sweeps, column-ordering studies and real-data preprocessing.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stmf/datagen.hpp"
#include "stmf/error.hpp"
#include "stmf/experiment.hpp"
#include "stmf/factorize.hpp"
#include "stmf/io.hpp"
#include "stmf/nmf.hpp"
#include "stmf/random.hpp"
#include "stmf/ward.hpp"

namespace fs = std::filesystem;
using namespace stmf;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidRank:
    case ErrorKind::InvalidArgument:
      return kExitUsage;
    case ErrorKind::EmptyMinimum:
    case ErrorKind::EmptySelection:
    case ErrorKind::SingleCluster:
      return kExitNumerical;
    default:
      return kExitData;
  }
}

struct RunFlags {
  std::string input;
  std::string method = "stmf";
  std::size_t rank = 3;
  std::size_t iters = 500;
  std::size_t reps = 10;
  double mask_frac = 0.2;
  std::string ordering = "min_asc";
  std::string init;
  std::uint64_t seed = 0;
  std::size_t subset_size = 0;
  double tol = -1.0;
  std::string dcor_scope = "full";
  std::size_t threads = 0;
  std::string output;
  std::string format = "json";
  std::string labels;
  std::string save_factors;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_rank) {
  cmd->add_option("input", f.input, "Input CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--method", f.method, "stmf or nmf")->check(CLI::IsMember({"stmf", "nmf"}));
  if (with_rank) cmd->add_option("--rank", f.rank, "Factorization rank")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  cmd->add_option("--iters", f.iters, "Maximum outer iterations")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  cmd->add_option("--reps", f.reps, "Repetitions")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  cmd->add_option("--mask-frac", f.mask_frac, "Held-out fraction")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--ordering", f.ordering, "Column ordering strategy");
  cmd->add_option("--init", f.init, "random_acol, nndsvd or random");
  cmd->add_option("--seed", f.seed, "Base seed");
  cmd->add_option("--subset-size", f.subset_size, "Random Acol subset size (0 = ceil(n/5))");
  cmd->add_option("--tol", f.tol, "Convergence tolerance");
  cmd->add_option("--dcor-scope", f.dcor_scope, "full or test")->check(CLI::IsMember({"full", "test"}));
  cmd->add_option("--threads", f.threads, "Worker threads for repetitions (0 = all cores)");
  cmd->add_option("-o,--output", f.output, "Output path (default stdout)");
  cmd->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

ExperimentConfig to_config(const RunFlags& f) {
  ExperimentConfig c;
  c.method = *parse_method(f.method);
  c.rank = f.rank;
  c.max_iterations = f.iters;
  c.repetitions = f.reps;
  c.mask_fraction = f.mask_frac;
  const auto ordering = parse_ordering(f.ordering);
  if (!ordering) throw Error(ErrorKind::InvalidArgument, "unknown ordering '" + f.ordering + "'");
  c.ordering = *ordering;
  if (!f.init.empty()) {
    const auto init = parse_init(f.init);
    if (!init) throw Error(ErrorKind::InvalidArgument, "unknown init '" + f.init + "'");
    c.init = *init;
  }
  c.seed = f.seed;
  c.subset_size = f.subset_size;
  if (f.tol >= 0.0) c.tolerance = f.tol;
  c.dcor_scope = *parse_dcor_scope(f.dcor_scope);
  c.threads = f.threads;
  c.validate();
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
}

std::vector<int> read_labels(const std::string& path) {
  const CsvMatrix table = read_csv(path);
  std::vector<int> labels;
  for (std::size_t i = 0; i < table.matrix.rows(); ++i) {
    if (!table.matrix.given(i, 0)) throw Error(ErrorKind::ParseError, "missing label on row " + std::to_string(i + 1));
    labels.push_back(static_cast<int>(table.matrix(i, 0)));
  }
  return labels;
}

// Writes the repetition-0 factors, prediction and latent matrices for plotting.
void save_factors(const fs::path& dir, const MaskedMatrix& data, const ExperimentConfig& config) {
  fs::create_directories(dir);
  const MaskSplit split = mask_split(data, config.mask_fraction, repetition_mask_seed(config.seed, 0));
  const MaskedMatrix train = data.restricted_to(split.train);
  const std::uint64_t init_seed = repetition_init_seed(config.seed, 0);
  std::ofstream(dir / "split.json") << split_to_json(split).dump() << '\n';

  std::vector<Matrix> latents;
  if (config.method == Method::Stmf) {
    StmfOptions opts;
    opts.rank = config.rank;
    opts.max_iterations = config.max_iterations;
    opts.ordering = config.ordering;
    opts.subset_size = config.subset_size;
    opts.seed = init_seed;
    opts.tolerance = config.resolved_tolerance();
    const StmfResult res = fit_stmf(train, opts);
    write_csv(dir / "U.csv", MaskedMatrix(res.factors.u));
    write_csv(dir / "V.csv", MaskedMatrix(res.factors.v));
    write_csv(dir / "prediction.csv", MaskedMatrix(predict(res.factors)));
    latents = latent_matrices(res.factors);
  } else {
    NmfOptions opts;
    opts.rank = config.rank;
    opts.max_iterations = config.max_iterations;
    opts.seed = init_seed;
    opts.init = config.resolved_init() == InitStrategy::Random ? NmfInit::Random : NmfInit::Nndsvd;
    opts.relative_tolerance = config.resolved_tolerance();
    const NmfResult res = nmf_fit(train, opts);
    write_csv(dir / "W.csv", MaskedMatrix(res.factors.w));
    write_csv(dir / "H.csv", MaskedMatrix(res.factors.h));
    write_csv(dir / "prediction.csv", MaskedMatrix(nmf_predict(res.factors)));
    latents = nmf_latent_matrices(res.factors);
  }
  for (std::size_t k = 0; k < latents.size(); ++k) {
    write_csv(dir / ("latent_" + std::to_string(k + 1) + ".csv"), MaskedMatrix(latents[k]));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse tropical matrix factorization benchmark harness"};
  app.require_subcommand(1);

  // gen
  SyntheticSpec gen_spec;
  std::string gen_out;
  double gen_mask_frac = 0.0;
  std::string gen_split_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic (max,+) matrix");
  gen->add_option("--rows", gen_spec.rows, "Row count")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
  gen->add_option("--cols", gen_spec.cols, "Column count")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
  gen->add_option("--rank", gen_spec.true_rank, "Planted rank")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
  gen->add_option("--seed", gen_spec.seed, "Seed");
  gen->add_option("-o,--output", gen_out, "Output CSV")->required();
  gen->add_option("--mask-frac", gen_mask_frac, "Also write a mask split with this held-out fraction");
  gen->add_option("--split-out", gen_split_out, "Mask split JSON path (default <output>.split.json)");

  // run / sweep / ordering
  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Repeated split/fit/evaluate on one input");
  add_run_flags(run, run_flags, true);
  run->add_option("--labels", run_flags.labels, "CSV with one integer cluster label per row (enables silhouette)");
  run->add_option("--save-factors", run_flags.save_factors, "Directory for repetition-0 factors and latent matrices");

  RunFlags sweep_flags;
  std::vector<std::size_t> sweep_ranks;
  auto* sweep = app.add_subcommand("sweep", "Run once per rank and select by training error");
  add_run_flags(sweep, sweep_flags, false);
  sweep->add_option("--ranks", sweep_ranks, "Ranks, comma separated")->required()->delimiter(',');

  RunFlags order_flags;
  std::vector<std::string> strategies{"none", "random", "min_asc", "min_desc", "max_asc", "max_desc", "mean_asc",
                                      "mean_desc"};
  auto* ordering = app.add_subcommand("ordering", "Compare column ordering strategies");
  add_run_flags(ordering, order_flags, true);
  ordering->add_option("--strategies", strategies, "Strategies, comma separated")->delimiter(',');

  // preprocess
  std::string pre_input, pre_output, pre_assignments;
  bool pre_log2 = false;
  std::size_t pre_clusters = 0;
  auto* pre = app.add_subcommand("preprocess", "log2(x+1) and Ward feature agglomeration");
  pre->add_option("input", pre_input, "Input CSV")->required()->check(CLI::ExistingFile);
  pre->add_flag("--log2", pre_log2, "Apply log2(x + 1)");
  pre->add_option("--agglomerate", pre_clusters, "Merge columns into this many meta-features");
  pre->add_option("-o,--output", pre_output, "Output CSV")->required();
  pre->add_option("--assignments", pre_assignments, "Write column-to-cluster assignment CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const SyntheticData data = generate_synthetic(gen_spec);
      write_csv(gen_out, data.matrix);
      std::cout << "wrote " << gen_spec.rows << "x" << gen_spec.cols << " rank-" << gen_spec.true_rank
                << " (max,+) matrix to " << gen_out << '\n';
      if (gen_mask_frac > 0.0) {
        const MaskSplit split = mask_split(data.matrix, gen_mask_frac, mix_seed(gen_spec.seed, streams::kMask));
        const std::string path = gen_split_out.empty() ? gen_out + ".split.json" : gen_split_out;
        emit(path, split_to_json(split).dump() + "\n");
        std::cout << "wrote " << split.test.count() << " held-out entries to " << path << '\n';
      }
    } else if (run->parsed()) {
      const ExperimentConfig config = to_config(run_flags);
      const MaskedMatrix data = read_csv(run_flags.input).matrix;
      std::vector<int> labels;
      if (!run_flags.labels.empty()) labels = read_labels(run_flags.labels);
      const RunReport report = run_experiment(data, config, run_flags.labels.empty() ? nullptr : &labels);
      emit(run_flags.output, run_flags.format == "json" ? to_json(report).dump(2) + "\n" : aggregate_csv(report));
      if (!run_flags.save_factors.empty()) save_factors(run_flags.save_factors, data, config);
    } else if (sweep->parsed()) {
      const ExperimentConfig config = to_config(sweep_flags);
      const MaskedMatrix data = read_csv(sweep_flags.input).matrix;
      const SweepReport report = run_sweep(data, config, sweep_ranks);
      emit(sweep_flags.output, sweep_flags.format == "json" ? to_json(report).dump(2) + "\n" : sweep_csv(report));
    } else if (ordering->parsed()) {
      const ExperimentConfig config = to_config(order_flags);
      std::vector<OrderingStrategy> parsed;
      for (const auto& s : strategies) {
        const auto o = parse_ordering(s);
        if (!o) throw Error(ErrorKind::InvalidArgument, "unknown ordering '" + s + "'");
        parsed.push_back(*o);
      }
      const MaskedMatrix data = read_csv(order_flags.input).matrix;
      const OrderingReport report = run_ordering_study(data, config, parsed);
      emit(order_flags.output, order_flags.format == "json" ? to_json(report).dump(2) + "\n" : ordering_csv(report));
    } else if (pre->parsed()) {
      const CsvMatrix table = read_csv(pre_input);
      MaskedMatrix m = table.matrix;
      std::vector<std::string> header = table.header;
      if (pre_log2) m = log_transform(m);
      if (pre->count("--agglomerate") > 0) {
        const Agglomeration agg = feature_agglomeration(m, pre_clusters);
        m = MaskedMatrix(agg.reduced);
        header.clear();
        if (!pre_assignments.empty()) {
          std::ostringstream out;
          out << "column,cluster\n";
          for (std::size_t j = 0; j < agg.assignment.size(); ++j) out << j << ',' << agg.assignment[j] << '\n';
          emit(pre_assignments, out.str());
        }
      }
      write_csv(pre_output, m, header);
      std::cout << "wrote " << m.rows() << "x" << m.cols() << " matrix to " << pre_output << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
