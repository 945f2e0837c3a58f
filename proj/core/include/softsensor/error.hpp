#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace softsensor {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Fatal structural problem in an input file (e.g. wrong column count).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A column has no spread, so it cannot be scaled or regressed on.
class DegenerateColumn : public InvalidArgument {
 public:
  DegenerateColumn(std::size_t column, const std::string& what)
      : InvalidArgument(what + " (column " + std::to_string(column) + ")"), column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(int iterations, const std::string& what)
      : Error(what + " after " + std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}

  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

}  // namespace softsensor
