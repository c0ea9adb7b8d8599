#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace tarski {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. `position()` is a zero-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A documented precondition does not hold. Carries the offending object when there is one.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message, std::string witness = {})
      : Error(witness.empty() ? message : message + " (witness: " + witness + ")"),
        witness_(std::move(witness)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// Structural problem with a certificate, or a combinator whose inputs do not fit together.
class CertificateError : public Error {
 public:
  explicit CertificateError(const std::string& message, std::string witness = {})
      : Error(witness.empty() ? message : message + " (witness: " + witness + ")"),
        witness_(std::move(witness)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

}  // namespace tarski
