#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace stablediff {

enum class ErrorCode {
  InvalidModel,
  QuadratureNonConvergence,
  NotPositiveRecurrent,
  NotIntegrable,
  OutOfDomain,
  ClassificationFailed,
  InvalidRequest,
  NotCentered,
  PoissonUnavailable,
  Divergent,
  PathExploded,
  HorizonExceeded,
  InvalidAlpha,
  InvalidConfig,
  WindowNotFound,
  TooManyClips,
  Io,
};

const char* error_code_name(ErrorCode code);

// Numeric diagnostics travel with the error so the CLI can emit them as JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::map<std::string, double> details = {})
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::map<std::string, double>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::map<std::string, double> details_;
};

}  // namespace stablediff
