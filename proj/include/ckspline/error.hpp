#ifndef CKSPLINE_ERROR_HPP
#define CKSPLINE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ckspline {

/// Evaluation point or sample outside the spline's interval.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration or violated precondition of a public operation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear system too ill-conditioned to trust its solution.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite gradient entry handed to an optimizer.
class NonFiniteGradient : public std::runtime_error {
 public:
  NonFiniteGradient(std::size_t segment, std::size_t power)
      : std::runtime_error("non-finite gradient at segment " +
                           std::to_string(segment) + ", power " +
                           std::to_string(power)),
        segment_(segment),
        power_(power) {}
  std::size_t segment() const noexcept { return segment_; }
  std::size_t power() const noexcept { return power_; }

 private:
  std::size_t segment_;
  std::size_t power_;
};

}  // namespace ckspline

#endif  // CKSPLINE_ERROR_HPP
