#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch, empty input, or non-finite entries.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A family of subspaces that is not a direct sum (rank deficiency).
class DegenerateDecompositionError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An operation that is only implemented for some norm models.
class ModelError : public Error {
 public:
  using Error::Error;
};

class BiorthogonalityError : public Error {
 public:
  BiorthogonalityError(const std::string& what, int row, int col, double deviation)
      : Error(what), row_(row), col_(col), deviation_(deviation) {}
  int row() const { return row_; }
  int col() const { return col_; }
  double deviation() const { return deviation_; }

 private:
  int row_;
  int col_;
  double deviation_;
};

/// Input document does not follow the file grammar. Line and column are 1-based;
/// zero means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }
  int line_;
  int column_;
};

}  // namespace dlab
