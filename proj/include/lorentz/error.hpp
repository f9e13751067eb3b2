#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lorentz {

enum class ErrorKind {
  InvalidPoint,
  MismatchedBase,
  PreconditionViolated,
  NonCausalSegment,
  NoCausalPath,
  Unsupported,
  UndefinedPoint,
  NonTimelikeInput,
  ChainNotCausal,
  PairNotCausal,
  PairNotFuture,
  PairNotPast,
  PairNotUnrelated,
  CoverageImpossible,
  DisjointTracesImpossible,
  WitnessRejected,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// True for errors that describe a geometric obstruction rather than a bug or
/// a bad input (the CLI reports these with their own exit status).
bool is_geometric_obstruction(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lorentz
