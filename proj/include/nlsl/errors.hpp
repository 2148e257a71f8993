#pragma once

#include <stdexcept>
#include <string>

namespace nlsl {

/// An input violates an invariant owned by `module()`.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string module, const std::string& message)
      : std::invalid_argument(module + ": " + message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// A computation could not complete (non-convergence, eigensolver failure).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field amplitude overflowed or became non-finite during evolution.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& message, double time)
      : NumericalError(message), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace nlsl
