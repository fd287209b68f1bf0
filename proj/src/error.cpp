#include "stmf/error.hpp"

namespace stmf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyMinimum: return "EmptyMinimum";
    case ErrorKind::InvalidRank: return "InvalidRank";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NegativeInput: return "NegativeInput";
    case ErrorKind::InvalidClusterCount: return "InvalidClusterCount";
    case ErrorKind::InfeasibleSplit: return "InfeasibleSplit";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::RowCountMismatch: return "RowCountMismatch";
    case ErrorKind::SingleCluster: return "SingleCluster";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace stmf
