#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ponfog {

enum class ErrorCode {
  InvalidParams,
  CapacityExceeded,
  SamePath,
  SelfPair,
  OutOfRange,
  TooLarge,
  InvalidRequest,
  MalformedTrace,
  Parse,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::SamePath: return "SamePath";
    case ErrorCode::SelfPair: return "SelfPair";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::MalformedTrace: return "MalformedTrace";
    case ErrorCode::Parse: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ponfog
