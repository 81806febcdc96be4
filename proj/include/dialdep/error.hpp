#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dialdep {

// Base of every data error raised by the library. The CLI maps these to exit
// code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}

  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class UnknownLabel : public Error {
 public:
  UnknownLabel(std::size_t line, const std::string& name)
      : Error("line " + std::to_string(line) + ": unknown label '" + name + "'"),
        line_(line),
        name_(name) {}

  std::size_t line() const { return line_; }
  const std::string& name() const { return name_; }

 private:
  std::size_t line_;
  std::string name_;
};

class RowNotStochastic : public Error {
 public:
  RowNotStochastic(std::size_t row, const std::string& detail)
      : Error("row " + std::to_string(row) + " is not stochastic: " + detail),
        row_(row),
        detail_(detail) {}

  std::size_t row() const { return row_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t row_;
  std::string detail_;
};

class InvalidDialogue : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyLexicon : public Error {
 public:
  EmptyLexicon() : Error("signal lexicon is empty") {}
};

class UncoveredToken : public Error {
 public:
  explicit UncoveredToken(int token)
      : Error("token " + std::to_string(token) + " is not covered by exactly one EDU"),
        token_(token) {}

  int token() const { return token_; }

 private:
  int token_;
};

class BrokenTree : public Error {
 public:
  using Error::Error;
};

class MissingRoot : public Error {
 public:
  using Error::Error;
};

class CorpusMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace dialdep
