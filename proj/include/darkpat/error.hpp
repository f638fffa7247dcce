#pragma once

#include <stdexcept>
#include <string>

namespace darkpat {

// Base for every failure raised by the library. The CLI maps IoError to exit
// code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing, unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input that does not follow a documented file contract (CSV, model JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Arguments or data that violate an operation's preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : Error(what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

// Model file failed a version, checksum or structural check.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace darkpat
