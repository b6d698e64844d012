#pragma once

#include <stdexcept>
#include <string>

namespace nlkg {

enum class ErrorKind {
  dimension,         // mismatched grid lengths
  domain,            // parameter outside its admissible range
  config,            // configuration syntax or semantic violation
  numerical,         // blow-up, non-convergence, tube exit
  io,                // file format or filesystem failure
};

/// Base exception for every failure raised by the library. The kind drives
/// the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical failure that happened at a known simulation time.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double time);
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// CLI exit code for an error kind: 2 config, 3 numerical, 4 I/O.
int exit_code(ErrorKind kind) noexcept;

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace nlkg
