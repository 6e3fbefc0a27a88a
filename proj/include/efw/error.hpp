#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace efw {

/// Base class of every recoverable failure in the workbench. `code()` is a
/// stable, machine-readable reason that the CLI reports verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax", "position " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

#define EFW_DEFINE_ERROR(Name, code_text)                                 \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& message) : Error(code_text, message) {} \
  };

EFW_DEFINE_ERROR(UnsupportedOperand, "unsupported-operand")
EFW_DEFINE_ERROR(BudgetExceeded, "budget-exceeded")
EFW_DEFINE_ERROR(IllegalMove, "illegal-move")
EFW_DEFINE_ERROR(StrategyBreakdown, "strategy-breakdown")
EFW_DEFINE_ERROR(InvalidInput, "invalid-input")
EFW_DEFINE_ERROR(UnsupportedFragment, "unsupported-fragment")
EFW_DEFINE_ERROR(SignatureMismatch, "signature-mismatch")
EFW_DEFINE_ERROR(UnboundVariable, "unbound-variable")

#undef EFW_DEFINE_ERROR

}  // namespace efw
