#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ipgm {

enum class ErrorCode {
  DimensionMismatch,
  ZeroNormVector,
  NonFiniteComponent,
  MalformedFile,
  EmptyFile,
  Io,
  UnknownVertex,
  AlreadyDeleted,
  AlreadyMasked,
  SelfLoop,
  DegreeOverflow,
  EmptyGraph,
  AllMasked,
  DegeneratePosition,
  InsufficientData,
  EmptyCluster,
  MalformedLog,
  DanglingDeleteReference,
  InvalidConfig,
  TargetUnreachable,
};

std::string_view to_string(ErrorCode code);

/// Exception type thrown by every ipgm module; `code()` identifies the failure.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace ipgm
