#include <cmath>
#include <bit>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "stmf/datagen.hpp"
#include "stmf/io.hpp"
#include "support.hpp"

using namespace stmf;
using test_support::covering_mask;
using test_support::throws_kind;

namespace {

bool bit_identical(const MaskedMatrix& a, const MaskedMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || !(a.mask() == b.mask())) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.given(i, j) && std::bit_cast<std::uint64_t>(a(i, j)) != std::bit_cast<std::uint64_t>(b(i, j))) return false;
  return true;
}

CsvMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

}  // namespace

TEST_CASE("matrix containers") {
  CHECK(throws_kind([] { Matrix{{1, 2}, {3}}; }, ErrorKind::RaggedRows));
  CHECK(throws_kind([] { MaskedMatrix(Matrix(2, 2), Mask(2, 3)); }, ErrorKind::DimensionMismatch));
  CHECK(throws_kind([] { MaskedMatrix(Matrix{{1, INFINITY}}); }, ErrorKind::InvalidArgument));

  Mask mask(1, 2, true);
  mask.set(0, 1, false);
  const MaskedMatrix m(Matrix{{1, INFINITY}}, mask);
  CHECK(std::isnan(m(0, 1)));
  CHECK(m.given_mean() == 1.0);
  CHECK(m.transposed().rows() == 2);
  CHECK(m.has_full_coverage() == false);

  const Permutation p({2, 0, 1});
  CHECK(p.inverse() == std::vector<std::size_t>{1, 2, 0});
  CHECK(p.inverted().inverted() == p);
  CHECK(throws_kind([] { Permutation({0, 0, 1}); }, ErrorKind::InvalidArgument));
}

TEST_CASE("csv round trip") {
  std::mt19937_64 rng(91);
  std::normal_distribution<double> d(0.0, 1e3);
  Matrix data(13, 7);
  for (double& x : data.values()) x = d(rng) / 7.0;
  data(0, 0) = 5e-320;
  data(0, 1) = -0.0;
  data(1, 0) = 1.0 / 3.0;
  const MaskedMatrix m(data, covering_mask(13, 7, 0.7, rng));

  std::ostringstream out;
  write_csv(out, m);
  std::istringstream in(out.str());
  const CsvMatrix back = parse_csv(in);
  CHECK(back.header.empty());
  CHECK(bit_identical(back.matrix, m));

  SUBCASE("with a header, through a file") {
    const std::vector<std::string> header{"a", "b", "c", "d", "e", "f", "g"};
    const auto path = std::filesystem::temp_directory_path() / "stmf_test_io_roundtrip.csv";
    write_csv(path, m, header);
    const CsvMatrix file = read_csv(path);
    std::filesystem::remove(path);
    CHECK(file.header == header);
    CHECK(bit_identical(file.matrix, m));
    CHECK(throws_kind([&] { write_csv(out, m, {"a"}); }, ErrorKind::DimensionMismatch));
  }
}

TEST_CASE("csv parsing rules") {
  const CsvMatrix c = parse("x,y,z\n1,,3\nNaN, 2.5 ,nan\n\n+4,5e-1,-6\n");
  CHECK(c.header == std::vector<std::string>{"x", "y", "z"});
  REQUIRE(c.matrix.rows() == 3);
  CHECK(c.matrix.given(0, 0));
  CHECK_FALSE(c.matrix.given(0, 1));
  CHECK_FALSE(c.matrix.given(1, 0));
  CHECK(c.matrix(1, 1) == 2.5);
  CHECK_FALSE(c.matrix.given(1, 2));
  CHECK(c.matrix(2, 0) == 4.0);
  CHECK(c.matrix(2, 1) == 0.5);
  CHECK(c.matrix(2, 2) == -6.0);

  // A leading empty cell does not make the first row a header.
  CHECK(parse(",1\n2,3\n").header.empty());
  CHECK(parse("\"gene\",1\n2,3\n").header.size() == 2);

  SUBCASE("errors carry their location") {
    try {
      parse("1,2\n3,abc\n");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
      CHECK(std::string(e.what()).find("line 2, column 2") != std::string::npos);
    }
    CHECK(throws_kind([] { parse("1,2\n3\n"); }, ErrorKind::RaggedRows));
    CHECK(throws_kind([] { parse("a,b\n"); }, ErrorKind::ParseError));
    CHECK(throws_kind([] { parse("1,inf\n"); }, ErrorKind::ParseError));
    CHECK(throws_kind([] { read_csv("/nonexistent/stmf.csv"); }, ErrorKind::Io));
  }
}

TEST_CASE("split sidecar") {
  const MaskedMatrix r = generate_synthetic({20, 10, 2, 3}).matrix;
  const MaskSplit s = mask_split(r, 0.2, 17);
  const nlohmann::json j = split_to_json(s);
  CHECK(j.at("test_fraction").get<double>() == 0.2);
  CHECK(j.at("seed").get<std::uint64_t>() == 17);
  CHECK(j.at("test_indices").size() == 40);

  const MaskSplit back = split_from_json(nlohmann::json::parse(j.dump()), r);
  CHECK(back.train == s.train);
  CHECK(back.test == s.test);
  CHECK(back.seed == 17);

  CHECK(throws_kind([&] { split_from_json(nlohmann::json{{"seed", 1}}, r); }, ErrorKind::ParseError));
  CHECK(throws_kind([&] { split_from_json(nlohmann::json{{"test_fraction", 0.2}, {"seed", 1}, {"test_indices", {{99, 0}}}}, r); },
                    ErrorKind::InvalidArgument));
}
