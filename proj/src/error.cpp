#include "msid/error.hpp"

namespace msid {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotStable: return "NotStable";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kSingularInnovation: return "SingularInnovation";
    case ErrorCode::kUnstable: return "Unstable";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kInvalidCutoff: return "InvalidCutoff";
    case ErrorCode::kZeroLeadingCoefficient: return "ZeroLeadingCoefficient";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNumericalInconsistency: return "NumericalInconsistency";
    case ErrorCode::kIngestion: return "IngestionError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace msid
