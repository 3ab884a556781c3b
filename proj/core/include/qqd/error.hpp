#pragma once

#include <stdexcept>
#include <string>

namespace qqd {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument or design entry lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A requested computation exceeds a configured enumeration or memory cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A design violates a structural precondition (level counts, balance).
class StructureError : public Error {
 public:
  using Error::Error;
};

// Malformed design file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace qqd
