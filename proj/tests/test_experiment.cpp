#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "stmf/datagen.hpp"
#include "stmf/experiment.hpp"
#include "support.hpp"

using namespace stmf;
using test_support::throws_kind;

namespace {

nlohmann::json without_runtime(nlohmann::json j) {
  for (auto& rep : j.at("repetitions")) rep.at("metrics").erase("runtime_seconds");
  return j;
}

ExperimentConfig small_config(Method method) {
  ExperimentConfig c;
  c.method = method;
  c.rank = 2;
  c.max_iterations = 60;
  c.repetitions = 4;
  c.seed = 5;
  c.threads = 1;
  return c;
}

const MaskedMatrix& small_data() {
  static const MaskedMatrix data = generate_synthetic({24, 14, 2, 11}).matrix;
  return data;
}

}  // namespace

TEST_CASE("configuration") {
  ExperimentConfig c;
  CHECK(c.resolved_init() == InitStrategy::RandomAcol);
  c.method = Method::Nmf;
  CHECK(c.resolved_init() == InitStrategy::Nndsvd);
  CHECK_NOTHROW(c.validate());

  ExperimentConfig bad;
  bad.rank = 0;
  CHECK(throws_kind([&] { bad.validate(); }, ErrorKind::InvalidRank));
  bad = ExperimentConfig{};
  bad.mask_fraction = 1.0;
  CHECK(throws_kind([&] { bad.validate(); }, ErrorKind::InvalidArgument));
  bad = ExperimentConfig{};
  bad.repetitions = 0;
  CHECK(throws_kind([&] { bad.validate(); }, ErrorKind::InvalidArgument));

  CHECK(parse_method("nmf") == Method::Nmf);
  CHECK_FALSE(parse_method("svd").has_value());
  CHECK(parse_dcor_scope(to_string(DcorScope::Test)) == DcorScope::Test);
  CHECK(parse_init(to_string(InitStrategy::Random)) == InitStrategy::Random);
}

TEST_CASE("repetition seeds") {
  std::set<std::uint64_t> seen;
  for (std::size_t rep = 0; rep < 20; ++rep) {
    seen.insert(repetition_mask_seed(3, rep));
    seen.insert(repetition_init_seed(3, rep));
  }
  CHECK(seen.size() == 40);
  CHECK(repetition_mask_seed(3, 1) == repetition_mask_seed(3, 1));
  CHECK(repetition_mask_seed(3, 1) != repetition_mask_seed(4, 1));
}

TEST_CASE("evaluate") {
  Matrix truth{{1, 2, 3}, {4, 5, 6}, {7, 8, 10}};
  Mask given(3, 3, true);
  given.set(2, 2, false);
  const MaskedMatrix data(truth, given);
  Mask train = given, test(3, 3, false);
  train.set(0, 1, false);
  test.set(0, 1, true);
  train.set(1, 2, false);
  test.set(1, 2, true);

  Matrix pred = truth;
  pred(2, 2) = -40.0;  // under the missing entry: must not count anywhere
  const MetricsReport exact = evaluate(data, train, test, pred, DcorScope::Full, nullptr);
  CHECK(exact.train_rmse == 0.0);
  CHECK(exact.test_rmse == 0.0);
  CHECK(exact.dcor_full == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.dcor_test == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.centered_row_norms->max <= 1e-12);

  pred(0, 1) += 3.0;
  pred(1, 2) -= 4.0;
  pred(0, 0) += 1.0;
  const MetricsReport off = evaluate(data, train, test, pred, DcorScope::Test, nullptr);
  CHECK(off.train_rmse == doctest::Approx(std::sqrt(1.0 / 6)));
  CHECK(off.test_rmse == doctest::Approx(std::sqrt(25.0 / 2)));
  CHECK(off.dcor == off.dcor_test);
  CHECK_FALSE(off.silhouette.has_value());

  const std::vector<int> labels{0, 0, 1};
  const MetricsReport with_labels = evaluate(data, train, test, pred, DcorScope::Full, &labels);
  REQUIRE(with_labels.silhouette.has_value());
  CHECK(*with_labels.silhouette >= -1.0);
  CHECK(*with_labels.silhouette <= 1.0);
}

TEST_CASE("run reports") {
  const MaskedMatrix& data = small_data();
  const RunReport stmf = run_experiment(data, small_config(Method::Stmf));
  const RunReport nmf = run_experiment(data, small_config(Method::Nmf));
  REQUIRE(stmf.repetitions.size() == 4);

  SUBCASE("methods see the same splits") {
    for (std::size_t rep = 0; rep < 4; ++rep) {
      CHECK(stmf.repetitions[rep].mask_seed == nmf.repetitions[rep].mask_seed);
      CHECK(stmf.repetitions[rep].init_seed == nmf.repetitions[rep].init_seed);
    }
  }
  SUBCASE("metrics are well formed") {
    for (const RunReport* r : {&stmf, &nmf})
      for (const auto& rep : r->repetitions) {
        CHECK(rep.metrics.dcor >= 0.0);
        CHECK(rep.metrics.dcor <= 1.0);
        CHECK(rep.metrics.train_rmse >= 0.0);
        CHECK(rep.metrics.test_rmse >= 0.0);
        CHECK(std::isfinite(rep.metrics.final_objective));
      }
  }
  SUBCASE("aggregates recompute exactly") {
    std::vector<double> dcor, train;
    for (const auto& rep : stmf.repetitions) dcor.push_back(rep.metrics.dcor), train.push_back(rep.metrics.train_rmse);
    CHECK(stmf.aggregate.dcor.median == median(dcor));
    CHECK(stmf.aggregate.dcor.min == *std::min_element(dcor.begin(), dcor.end()));
    CHECK(stmf.aggregate.train_rmse.max == *std::max_element(train.begin(), train.end()));

    std::vector<RepetitionReport> three(3);
    three[0].metrics.dcor = 0.9;
    three[1].metrics.dcor = 0.3;
    three[2].metrics.dcor = 0.5;
    CHECK(aggregate_repetitions(three).dcor.median == 0.5);
  }
  SUBCASE("a repetition is reproducible from its seeds") {
    const ExperimentConfig c = small_config(Method::Stmf);
    const auto& rep = stmf.repetitions[2];
    const MaskSplit split = mask_split(data, c.mask_fraction, rep.mask_seed);
    const FitOutput fit = fit_method(data.restricted_to(split.train), c, rep.init_seed);
    const MetricsReport m = evaluate(data, split.train, split.test, fit.prediction, c.dcor_scope, nullptr);
    CHECK(m.dcor == rep.metrics.dcor);
    CHECK(m.test_rmse == rep.metrics.test_rmse);
    CHECK(fit.final_objective == rep.metrics.final_objective);

    double ss = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i)
      for (std::size_t j = 0; j < data.cols(); ++j)
        if (split.train(i, j)) ss += std::pow(data(i, j) - fit.prediction(i, j), 2);
    CHECK(m.train_rmse == doctest::Approx(std::sqrt(ss / static_cast<double>(split.train.count()))).epsilon(1e-14));
  }
  SUBCASE("deterministic, also across worker counts") {
    ExperimentConfig threaded = small_config(Method::Stmf);
    threaded.threads = 3;
    CHECK(without_runtime(to_json(run_experiment(data, threaded))) == without_runtime(to_json(stmf)));
    CHECK(without_runtime(to_json(run_experiment(data, small_config(Method::Nmf)))) == without_runtime(to_json(nmf)));
  }
  SUBCASE("json round trip") {
    for (const RunReport* r : {&stmf, &nmf}) {
      const nlohmann::json j = to_json(*r);
      CHECK(to_json(run_report_from_json(nlohmann::json::parse(j.dump()))) == j);
    }
    nlohmann::json broken = to_json(stmf);
    broken["schema_version"] = 99;
    CHECK(throws_kind([&] { run_report_from_json(broken); }, ErrorKind::ParseError));
  }
  SUBCASE("aggregate csv") {
    const std::string csv = aggregate_csv(stmf);
    CHECK(csv.rfind("statistic,dcor,train_rmse,test_rmse\nmin,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }
}

TEST_CASE("rank sweep") {
  const MaskedMatrix data = generate_synthetic({30, 18, 3, 12}).matrix;
  ExperimentConfig c = small_config(Method::Stmf);
  c.max_iterations = 150;
  c.repetitions = 3;
  const SweepReport s = run_sweep(data, c, {1, 2, 3, 4});
  REQUIRE(s.entries.size() == 4);
  std::size_t best = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    if (s.entries[k].train_rmse < s.entries[best].train_rmse) best = k;
  }
  CHECK(s.selected_rank == s.entries[best].rank);
  CHECK(to_json(s).at("selected_rank") == s.selected_rank);
  for (std::size_t k = 1; k < 4; ++k) CHECK(s.entries[k].train_rmse <= s.entries[k - 1].train_rmse + 1e-9);

  const SweepReport single = run_sweep(data, c, {2});
  CHECK(single.selected_rank == 2);
  c.rank = 2;
  CHECK(without_runtime(to_json(single.runs[0])) == without_runtime(to_json(run_experiment(data, c))));
  CHECK(throws_kind([&] { run_sweep(data, c, {}); }, ErrorKind::InvalidArgument));
}

TEST_CASE("ordering study") {
  ExperimentConfig c = small_config(Method::Stmf);
  const std::vector<OrderingStrategy> strategies{OrderingStrategy::None, OrderingStrategy::MinAsc,
                                                 OrderingStrategy::Random};
  const OrderingReport o = run_ordering_study(small_data(), c, strategies);
  REQUIRE(o.groups.size() == 3);
  for (std::size_t g = 0; g < 3; ++g) {
    CHECK(o.groups[g].strategy == strategies[g]);
    CHECK(o.groups[g].dcor.size() == 4);
    CHECK(o.groups[g].median_dcor == median(o.groups[g].dcor));
  }
  c.ordering = OrderingStrategy::MinAsc;
  const RunReport direct = run_experiment(small_data(), c);
  for (std::size_t r = 0; r < 4; ++r) CHECK(o.groups[1].dcor[r] == direct.repetitions[r].metrics.dcor);

  c.method = Method::Nmf;
  CHECK(throws_kind([&] { run_ordering_study(small_data(), c, strategies); }, ErrorKind::InvalidArgument));
  CHECK(ordering_csv(o).rfind("strategy,repetition,dcor\n", 0) == 0);
}
