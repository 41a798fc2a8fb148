#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonholo {

enum class ErrorKind {
  Parse,
  DimensionMismatch,
  Io,
  Validation,
  SingularPoint,
  DegenerateTriad,
  GridMismatch,
  InsufficientSampling,
  QuadratureDivergence,
  GridTooCoarse,
  NonPositiveKernel,
  EigenFailure,
};

std::string_view to_string(ErrorKind kind);

// Validation-class errors map to CLI exit code 2, numeric failures to 3.
bool is_validation_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Expression or file parse failure, located by 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column, std::string token)
      : Error(ErrorKind::Parse, format(message, line, column, token)),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  static std::string format(const std::string& message, int line, int column,
                            const std::string& token) {
    std::string out = message + " at line " + std::to_string(line) + ", column " +
                      std::to_string(column);
    if (!token.empty()) out += " (token '" + token + "')";
    return out;
  }

  int line_;
  int column_;
  std::string token_;
};

}  // namespace nonholo
