#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace colplan {

enum class ErrorCode {
  SyntaxError,
  NextOperatorForbidden,
  ResourceLimit,
  NoPositiveWitness,
  InvalidWorld,
  InvalidTask,
  Unreachable,
  EmptyLanguage,
  UnsupportedMission,
  NoAcceptingPath,
  LevelDisconnected,
  DeadlockDetected,
  NegativeObligationViolated,
  ProtocolStuck,
  BudgetExceeded,
  InfeasibleMission,
  InvalidScenario,
  Io,
};

std::string_view toString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure; `position` is a 0-based byte offset into the input.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorCode code, std::size_t position, const std::string& what)
      : Error(code, what + " at offset " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace colplan
