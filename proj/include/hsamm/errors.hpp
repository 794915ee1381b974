#ifndef HSAMM_ERRORS_HPP_
#define HSAMM_ERRORS_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsamm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class NotAFence : public Error {
 public:
  explicit NotAFence(const std::string& id)
      : Error("instruction " + id + " is not a FENCE") {}
};

class UnknownLoad : public Error {
 public:
  explicit UnknownLoad(const std::string& what) : Error(what) {}
};

// A transition was requested whose guard does not hold. `guard` is the guard
// label (grd1, grd2, ...) of the named event.
class GuardFailed : public Error {
 public:
  GuardFailed(std::string event, std::string guard, const std::string& detail)
      : Error(event + ": " + guard + " failed: " + detail),
        event_(std::move(event)),
        guard_(std::move(guard)) {}
  const std::string& event() const { return event_; }
  const std::string& guard() const { return guard_; }

 private:
  std::string event_;
  std::string guard_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column),
        message_(message) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

struct Diagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class StateLimitExceeded : public Error {
 public:
  explicit StateLimitExceeded(std::uint64_t limit)
      : Error("state limit exceeded (" + std::to_string(limit) + " states)"),
        limit_(limit) {}
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
};

class ReplayError : public Error {
 public:
  ReplayError(std::size_t step, const std::string& detail)
      : Error("replay failed at step " + std::to_string(step) + ": " + detail),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class Unreachable : public Error {
 public:
  explicit Unreachable(std::uint64_t explored)
      : Error("target unreachable after exploring " +
              std::to_string(explored) + " states"),
        explored_(explored) {}
  std::uint64_t explored() const { return explored_; }

 private:
  std::uint64_t explored_;
};

class InvalidBounds : public Error {
 public:
  using Error::Error;
};

}  // namespace hsamm

#endif  // HSAMM_ERRORS_HPP_
