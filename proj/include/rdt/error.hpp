#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdt {

/// Broad failure classes; the CLI maps each onto a process exit code.
enum class ErrorKind {
  input,       // malformed configuration, file, or argument
  physics,     // positivity loss, NaN, pole crossing
  divergence,  // iteration failed to contract
  gate,        // smallness condition not met
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a field that must stay strictly positive does not.
class PositivityError : public Error {
 public:
  PositivityError(std::string field, std::size_t index, double value)
      : Error(ErrorKind::physics,
              "positivity lost in " + field + " at node " +
                  std::to_string(index) + " (value " + std::to_string(value) +
                  ")"),
        field_(std::move(field)),
        index_(index),
        value_(value) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  std::string field_;
  std::size_t index_;
  double value_;
};

}  // namespace rdt
