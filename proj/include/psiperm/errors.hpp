#pragma once

#include <stdexcept>
#include <string>

namespace psiperm {

// Root of every domain error. The CLI maps each subclass to an exit code via
// exit_code().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

// Bad input or configuration: malformed number specs, invalid windows,
// violated preconditions.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class StreamExhausted : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class RationalNotAdmitted : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class BelowFirstDenominator : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ProxyTooCoarse : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyWindow : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InsufficientRounds : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Two values could not be ordered within the refinement budget.
class CannotSeparate : public Error {
 public:
  CannotSeparate(const std::string& what, std::string left, std::string right)
      : Error(what), left_interval_(std::move(left)), right_interval_(std::move(right)) {}
  int exit_code() const noexcept override { return 3; }
  const std::string& left_interval() const noexcept { return left_interval_; }
  const std::string& right_interval() const noexcept { return right_interval_; }

 private:
  std::string left_interval_;
  std::string right_interval_;
};

class TieDetected : public Error {
 public:
  TieDetected(const std::string& t, std::string first, std::string second)
      : Error("tie at t=" + t + " between " + first + " and " + second),
        t_(t),
        first_(std::move(first)),
        second_(std::move(second)) {}
  int exit_code() const noexcept override { return 3; }
  const std::string& t() const noexcept { return t_; }
  const std::string& first() const noexcept { return first_; }
  const std::string& second() const noexcept { return second_; }

 private:
  std::string t_;
  std::string first_;
  std::string second_;
};

class OrderingMismatch : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

class LemmaViolation : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

// Invariant breaks inside the construction. These indicate bugs, not bad input.
class ModuliNotCoprime : public Error {
 public:
  ModuliNotCoprime(const std::string& what, std::string gcd)
      : Error(what), gcd_(std::move(gcd)) {}
  const std::string& gcd() const noexcept { return gcd_; }

 private:
  std::string gcd_;
};

class NonIntegerQuotient : public Error {
 public:
  using Error::Error;
};

class GrowthScheduleUnsatisfiable : public Error {
 public:
  using Error::Error;
};

}  // namespace psiperm
