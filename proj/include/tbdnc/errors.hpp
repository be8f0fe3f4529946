#pragma once

#include <stdexcept>
#include <string>

namespace tbdnc {

// Failure categories; the CLI maps them onto exit codes.
enum class ErrorKind {
  argument,
  dimension,
  bounds,
  empty_input,
  exposure_undefined,
  gravity_not_dominant,
  no_curvature,
  kernel_too_noisy,
  spec,
  parse,
  version,
  io,
  empty_report,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry a 1-based line/column into the offending document.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorKind::parse, what + " (line " + std::to_string(line) +
                                    ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace tbdnc
