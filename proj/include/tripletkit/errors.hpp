#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tripletkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an operation that requires acyclic input meets a cycle.
class CycleError : public std::runtime_error {
 public:
  CycleError(const std::string& what, std::vector<std::uint32_t> witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}

  const std::vector<std::uint32_t>& witness() const noexcept { return witness_; }

 private:
  std::vector<std::uint32_t> witness_;
};

class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric that is mathematically undefined for its input (constant vector, zero spread).
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace tripletkit
