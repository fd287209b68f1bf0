#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "stmf/datagen.hpp"
#include "stmf/matrix.hpp"

namespace stmf {

/// A matrix as stored on disk: comma separated, one row per line, an empty
/// cell for a missing entry, and an optional header row.
struct CsvMatrix {
  std::vector<std::string> header;  // empty when the file had none
  MaskedMatrix matrix;
};

/// The first row is a header when its first cell is not numeric. "nan" and
/// "NaN" cells read as missing. Throws ParseError (with 1-based line and
/// column) and RaggedRows.
CsvMatrix parse_csv(std::istream& in);
CsvMatrix read_csv(const std::filesystem::path& path);

/// Writes given entries with 17 significant digits and missing entries as
/// empty cells.
void write_csv(std::ostream& out, const MaskedMatrix& m, const std::vector<std::string>& header = {});
void write_csv(const std::filesystem::path& path, const MaskedMatrix& m, const std::vector<std::string>& header = {});

/// {"test_fraction": f, "seed": s, "test_indices": [[i, j], ...]}
nlohmann::json split_to_json(const MaskSplit& split);
MaskSplit split_from_json(const nlohmann::json& j, const MaskedMatrix& source);

}  // namespace stmf
