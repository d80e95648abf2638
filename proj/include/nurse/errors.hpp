#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nurse {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The instance data breaks a structural invariant (e.g. a nurse with no
/// feasible pattern, a demand matrix of the wrong shape).
class InstanceInvalid : public Error {
 public:
  using Error::Error;
};

/// A schedule assigns a nurse a pattern outside that nurse's feasible set.
class ScheduleInvalid : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

/// Malformed instance or results text. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), message_(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
};

}  // namespace nurse
