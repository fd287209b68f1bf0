#include "stmf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "stmf/error.hpp"

namespace stmf {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                         : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool is_missing_token(const std::string& cell) { return cell.empty() || cell == "nan" || cell == "NaN"; }

std::optional<double> parse_number(const std::string& cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

CsvMatrix parse_csv(std::istream& in) {
  CsvMatrix out;
  std::vector<double> values;
  std::vector<bool> given;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first_row = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_cells(line);
    if (first_row) {
      first_row = false;
      if (!is_missing_token(cells[0]) && !parse_number(cells[0])) {
        out.header = std::move(cells);
        cols = out.header.size();
        continue;
      }
    }
    if (cols == 0) cols = cells.size();
    if (cells.size() != cols) {
      throw Error(ErrorKind::RaggedRows, "line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                                             " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (is_missing_token(cells[c])) {
        values.push_back(std::numeric_limits<double>::quiet_NaN());
        given.push_back(false);
        continue;
      }
      const auto v = parse_number(cells[c]);
      if (!v) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                                               ": cannot parse '" + cells[c] + "'");
      }
      values.push_back(*v);
      given.push_back(true);
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorKind::ParseError, "no data rows");

  Matrix data(rows, cols);
  Mask mask(rows, cols, false);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      data(i, j) = values[i * cols + j];
      mask.set(i, j, given[i * cols + j]);
    }
  out.matrix = MaskedMatrix(std::move(data), std::move(mask));
  return out;
}

CsvMatrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return parse_csv(in);
}

void write_csv(std::ostream& out, const MaskedMatrix& m, const std::vector<std::string>& header) {
  if (!header.empty()) {
    if (header.size() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "header length differs from column count");
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
  }
  std::ostringstream cell;
  cell << std::setprecision(17);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      if (m.given(i, j)) {
        cell.str({});
        cell << m(i, j);
        out << cell.str();
      }
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const MaskedMatrix& m, const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_csv(out, m, header);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

nlohmann::json split_to_json(const MaskSplit& split) {
  nlohmann::json indices = nlohmann::json::array();
  for (const auto& [i, j] : split.test_indices()) indices.push_back({i, j});
  return {{"test_fraction", split.test_fraction}, {"seed", split.seed}, {"test_indices", std::move(indices)}};
}

MaskSplit split_from_json(const nlohmann::json& j, const MaskedMatrix& source) {
  try {
    std::vector<std::pair<std::size_t, std::size_t>> indices;
    for (const auto& pair : j.at("test_indices")) {
      indices.emplace_back(pair.at(0).get<std::size_t>(), pair.at(1).get<std::size_t>());
    }
    return split_from_test_indices(source, j.at("test_fraction").get<double>(), j.at("seed").get<std::uint64_t>(),
                                   indices);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("mask split sidecar: ") + e.what());
  }
}

}  // namespace stmf
