#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "stmf/metrics.hpp"
#include "support.hpp"

using namespace stmf;
using test_support::dcor_oracle;
using test_support::throws_kind;
using test_support::uniform_matrix;

namespace {

Mask all_given(std::size_t m, std::size_t n) { return Mask(m, n, true); }

}  // namespace

TEST_CASE("rmse") {
  const Matrix ref(1, 2, 0.0);
  Matrix approx(1, 2);
  approx(0, 0) = 3;
  approx(0, 1) = 4;
  CHECK(rmse(ref, approx, all_given(1, 2)) == doctest::Approx(3.5355339059327378).epsilon(1e-15));
  CHECK(rmse(approx, approx, all_given(1, 2)) == 0.0);

  SUBCASE("only the selection counts") {
    Mask sel(1, 2, false);
    sel.set(0, 1, true);
    CHECK(rmse(ref, approx, sel) == 4.0);
    CHECK(throws_kind([&] { rmse(ref, approx, Mask(1, 2, false)); }, ErrorKind::EmptySelection));
  }
  SUBCASE("entry order does not matter") {
    Matrix swapped(1, 2);
    swapped(0, 0) = 4;
    swapped(0, 1) = 3;
    CHECK(rmse(ref, swapped, all_given(1, 2)) == rmse(ref, approx, all_given(1, 2)));
  }
  SUBCASE("shape mismatch") {
    CHECK(throws_kind([&] { rmse(ref, Matrix(2, 1, 0.0), all_given(1, 2)); }, ErrorKind::DimensionMismatch));
  }
}

TEST_CASE("distance correlation agrees with the definition") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<std::size_t> rows(2, 12), cols(1, 5);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = rows(rng);
    const Matrix x = uniform_matrix(n, cols(rng), rng, -2, 2);
    const Matrix y = uniform_matrix(n, cols(rng), rng, -2, 2);
    const double d = distance_correlation(x, y);
    worst = std::max(worst, std::abs(d - dcor_oracle(x, y)));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(std::abs(d - distance_correlation(y, x)) <= 1e-12);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("distance correlation special cases") {
  std::mt19937_64 rng(62);
  for (int t = 0; t < 50; ++t) {
    const Matrix x = uniform_matrix(9, 4, rng);
    CHECK(std::abs(distance_correlation(x, x) - 1.0) <= 1e-12);

    const Matrix y = uniform_matrix(9, 2, rng);
    Matrix shifted = x;
    for (double& v : shifted.values()) v += 3.75;
    CHECK(std::abs(distance_correlation(shifted, y) - distance_correlation(x, y)) <= 1e-12);
  }
  const Matrix x = uniform_matrix(6, 3, rng);
  CHECK(distance_correlation(Matrix(6, 3, 2.5), x) == 0.0);
  CHECK(distance_correlation(x, Matrix(6, 1, 0.0)) == 0.0);

  // A 3x1 example worked by hand: equally spaced points against a 0/1 split.
  Matrix a(3, 1), b(3, 1);
  a(0, 0) = 0, a(1, 0) = 1, a(2, 0) = 2;
  b(0, 0) = 0, b(1, 0) = 0, b(2, 0) = 1;
  CHECK(distance_correlation(a, b) == doctest::Approx(dcor_oracle(a, b)).epsilon(1e-14));

  CHECK(throws_kind([&] { distance_correlation(Matrix(3, 1, 0.0), Matrix(4, 1, 0.0)); }, ErrorKind::RowCountMismatch));
  CHECK(throws_kind([&] { distance_correlation(Matrix(1, 1, 0.0), Matrix(1, 1, 0.0)); }, ErrorKind::InvalidArgument));
}

TEST_CASE("row correlations") {
  std::mt19937_64 rng(63);
  const Matrix x = uniform_matrix(5, 7, rng, 0.1, 2);
  Matrix cubed = x, negated = x;
  for (double& v : cubed.values()) v = v * v * v;
  for (double& v : negated.values()) v = -v;

  for (const auto& c : row_correlations(x, x, CorrelationKind::Pearson)) CHECK(*c == doctest::Approx(1.0).epsilon(1e-14));
  for (const auto& c : row_correlations(x, negated, CorrelationKind::Pearson)) CHECK(*c == doctest::Approx(-1.0).epsilon(1e-14));
  for (const auto& c : row_correlations(x, cubed, CorrelationKind::Spearman)) CHECK(*c == 1.0);
  for (const auto& c : row_correlations(x, cubed, CorrelationKind::Pearson)) CHECK(*c < 1.0);

  SUBCASE("constant rows are undefined and left out of summaries") {
    Matrix flat = x;
    for (std::size_t j = 0; j < flat.cols(); ++j) flat(2, j) = 1.0;
    const auto c = row_correlations(x, flat, CorrelationKind::Pearson);
    CHECK_FALSE(c[2].has_value());
    CHECK(c[0].has_value());
    CHECK(summarize_defined(c)->count == 4);
    CHECK_FALSE(summarize_defined({std::nullopt}).has_value());
  }
}

TEST_CASE("average ranks and summaries") {
  CHECK(average_ranks({10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});
  CHECK(average_ranks({1, 1, 1}) == std::vector<double>{2, 2, 2});

  CHECK(median({0.9, 0.3, 0.5}) == 0.5);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  const Summary s = summarize({0.9, 0.3, 0.5});
  CHECK(s.count == 3);
  CHECK(s.min == 0.3);
  CHECK(s.max == 0.9);
  CHECK(s.mean == doctest::Approx(1.7 / 3));
  CHECK(throws_kind([] { median({}); }, ErrorKind::EmptySelection));
}

TEST_CASE("centered row norms") {
  std::mt19937_64 rng(64);
  const Matrix x = uniform_matrix(4, 9, rng);
  const RowNorms same = centered_row_norms(x, x);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(same.raw[i] == 0.0);
    CHECK(same.centered[i] == 0.0);
  }

  Matrix shifted = x;
  for (double& v : shifted.values()) v += 0.5;
  for (Centering c : {Centering::Global, Centering::PerRow}) {
    const RowNorms r = centered_row_norms(x, shifted, c);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(r.raw[i] == doctest::Approx(0.5 * 3.0).epsilon(1e-14));
      CHECK(r.centered[i] <= 1e-14);
    }
  }

  SUBCASE("2x2 by hand") {
    Matrix o(2, 2), a(2, 2, 0.0);
    o(0, 0) = 1, o(0, 1) = 2, o(1, 0) = 3, o(1, 1) = 6;
    // Global mean of o is 3, so centred o is [[-2,-1],[0,3]] and a stays 0.
    const RowNorms g = centered_row_norms(o, a);
    CHECK(g.raw[0] == doctest::Approx(std::sqrt(5.0)));
    CHECK(g.raw[1] == doctest::Approx(std::sqrt(45.0)));
    CHECK(g.centered[0] == doctest::Approx(std::sqrt(5.0)));
    CHECK(g.centered[1] == doctest::Approx(3.0));
    // Row means 1.5 and 4.5: centred rows [-0.5,0.5] and [-1.5,1.5].
    const RowNorms p = centered_row_norms(o, a, Centering::PerRow);
    CHECK(p.centered[0] == doctest::Approx(std::sqrt(0.5)));
    CHECK(p.centered[1] == doctest::Approx(std::sqrt(4.5)));
  }
}

TEST_CASE("silhouette") {
  std::mt19937_64 rng(65);
  std::normal_distribution<double> noise(0.0, 0.1);

  SUBCASE("separated clouds") {
    Matrix x(40, 2);
    std::vector<int> labels(40);
    for (std::size_t i = 0; i < 40; ++i) {
      labels[i] = i < 20 ? 0 : 1;
      x(i, 0) = (i < 20 ? 0.0 : 10.0) + noise(rng);
      x(i, 1) = noise(rng);
    }
    CHECK(silhouette_score(x, labels) > 0.9);
  }
  SUBCASE("random labels on one cloud") {
    std::normal_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    Matrix x(200, 2);
    std::vector<int> labels(200);
    for (std::size_t i = 0; i < 200; ++i) {
      x(i, 0) = unit(rng);
      x(i, 1) = unit(rng);
      labels[i] = coin(rng) ? 1 : 0;
    }
    CHECK(std::abs(silhouette_score(x, labels)) < 0.1);
  }
  SUBCASE("a point on the midline") {
    Matrix x(5, 1);
    x(0, 0) = -1.1, x(1, 0) = -0.9, x(2, 0) = 0.0, x(3, 0) = 0.9, x(4, 0) = 1.1;
    const std::vector<int> labels{0, 0, 0, 1, 1};
    CHECK(std::abs(silhouette_samples(x, labels)[2]) < 1e-12);
  }
  SUBCASE("singletons and errors") {
    Matrix x(3, 1);
    x(0, 0) = 0, x(1, 0) = 1, x(2, 0) = 5;
    const auto s = silhouette_samples(x, {0, 0, 1});
    CHECK(s[2] == 0.0);
    // Point 0: a = 1, b = 5.
    CHECK(s[0] == doctest::Approx(0.8));
    const double score = silhouette_score(x, {0, 0, 1});
    CHECK(score >= -1.0);
    CHECK(score <= 1.0);
    CHECK(throws_kind([&] { silhouette_score(x, {2, 2, 2}); }, ErrorKind::SingleCluster));
    CHECK(throws_kind([&] { silhouette_score(x, {0, 1}); }, ErrorKind::DimensionMismatch));
  }
}
