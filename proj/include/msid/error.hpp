#pragma once

#include <stdexcept>
#include <string>

namespace msid {

enum class ErrorCode {
  kInvalidArgument,
  kNotStable,
  kNoConvergence,
  kSingularInnovation,
  kUnstable,
  kRankDeficient,
  kInvalidCutoff,
  kZeroLeadingCoefficient,
  kIndexOutOfRange,
  kNumericalInconsistency,
  kIngestion,
  kIo,
};

// Short stable name, e.g. "NoConvergence". Used in CSV status cells.
const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace msid
