#pragma once

#include <stdexcept>
#include <string>

namespace hflz {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

/// A transformation was asked to run outside the fragment it supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A finite-domain resource guard (table size, window) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace hflz
