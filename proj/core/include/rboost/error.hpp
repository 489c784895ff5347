#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rboost {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, datasets, model records).
class DataError : public Error {
 public:
  using Error::Error;
};

// Text-format parse failure; carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Violated precondition on an argument (bad dimension, out-of-range value).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Numerical failure: non-finite objective, singular system.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace rboost
