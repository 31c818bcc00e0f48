#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hnet {

enum class ErrorCode {
  // ingest
  EmptyInput,
  MalformedCsv,
  UnknownOverrideColumn,
  NoUsableColumns,
  // combi
  CombinatorialBudgetExceeded,
  // stats
  InvalidCounts,
  SameFeaturePair,
  DegenerateSplit,
  // mtm
  EmptyFamily,
  // graph
  UnsupportedFormat,
  MalformedGraph,
  // simulate
  MalformedNetwork,
  CyclicGraph,
  MalformedCpt,
  UnknownParent,
  // score
  UnknownVariable,
  DimensionMismatch,
  // engine
  NoTestsPerformed,
  InvalidConfig,
  Io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::UnknownOverrideColumn: return "UnknownOverrideColumn";
    case ErrorCode::NoUsableColumns: return "NoUsableColumns";
    case ErrorCode::CombinatorialBudgetExceeded: return "CombinatorialBudgetExceeded";
    case ErrorCode::InvalidCounts: return "InvalidCounts";
    case ErrorCode::SameFeaturePair: return "SameFeaturePair";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MalformedGraph: return "MalformedGraph";
    case ErrorCode::MalformedNetwork: return "MalformedNetwork";
    case ErrorCode::CyclicGraph: return "CyclicGraph";
    case ErrorCode::MalformedCpt: return "MalformedCpt";
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoTestsPerformed: return "NoTestsPerformed";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hnet
