#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace canonconn {

enum class ErrorKind {
  ShapeMismatch,
  Singular,
  NotSurjective,
  GramNotSPD,
  NotAntisymmetric,
  JacobiFails,
  NotStratified,
  GradingViolation,
  CharacterizationFailed,
  Inconsistent,
  NonUniqueSolution,
  NotBracketGenerating,
  SymbolMismatch,
  UnsupportedModel,
  Parse,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace canonconn
