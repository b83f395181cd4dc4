#ifndef SPA_ERROR_HPP
#define SPA_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace spa {

enum class ErrorCode {
  DuplicateChoice,
  UnknownProject,
  UnknownSupervisor,
  WorkloadOutOfRange,
  OrphanProject,
  EmptyChoiceList,
  TooManyChoices,
  DuplicateRank,
  NonContiguousRanks,
  MalformedCell,
  RowCountMismatch,
  InfeasibleAllocation,
  RankOutOfRange,
  EmptyCohort,
  SameRank,
  RepairTimeout,
  InstanceTooLarge,
  Infeasible,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateChoice: return "DuplicateChoice";
    case ErrorCode::UnknownProject: return "UnknownProject";
    case ErrorCode::UnknownSupervisor: return "UnknownSupervisor";
    case ErrorCode::WorkloadOutOfRange: return "WorkloadOutOfRange";
    case ErrorCode::OrphanProject: return "OrphanProject";
    case ErrorCode::EmptyChoiceList: return "EmptyChoiceList";
    case ErrorCode::TooManyChoices: return "TooManyChoices";
    case ErrorCode::DuplicateRank: return "DuplicateRank";
    case ErrorCode::NonContiguousRanks: return "NonContiguousRanks";
    case ErrorCode::MalformedCell: return "MalformedCell";
    case ErrorCode::RowCountMismatch: return "RowCountMismatch";
    case ErrorCode::InfeasibleAllocation: return "InfeasibleAllocation";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::EmptyCohort: return "EmptyCohort";
    case ErrorCode::SameRank: return "SameRank";
    case ErrorCode::RepairTimeout: return "RepairTimeout";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spa

#endif  // SPA_ERROR_HPP
