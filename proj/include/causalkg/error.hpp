#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace causalkg {

enum class ErrorKind {
  unknown_variable,
  unknown_state,
  incomplete_assignment,
  invalid_model,
  invalid_query,
  zero_probability_evidence,
  missing_column,
  unestimable_row,
  missing_mediator,
  zero_joint_probability,
  decomposition_violation,
  invalid_base_iri,
  unmapped_variable,
  unknown_prefix,
  syntax,
  io,
  format,
};

/// Library-wide exception. The kind distinguishes domain errors (CLI exit 2)
/// from I/O and file-format errors (CLI exit 3).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure with a 1-based source position and the token set the
/// parser would have accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string found,
              std::vector<std::string> expected)
      : Error(ErrorKind::syntax, format_message(line, column, found, expected)),
        line_(line),
        column_(column),
        found_(std::move(found)),
        expected_(std::move(expected)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& found() const { return found_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format_message(std::size_t line, std::size_t column,
                                    const std::string& found,
                                    const std::vector<std::string>& expected);

  std::size_t line_;
  std::size_t column_;
  std::string found_;
  std::vector<std::string> expected_;
};

}  // namespace causalkg
