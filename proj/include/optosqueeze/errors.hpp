#pragma once

#include <stdexcept>
#include <string>

namespace optosqueeze {

// Error taxonomy. The CLI maps each family onto an exit code:
// ValidationError -> 2, InstabilityError -> 3, ConvergenceError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: out-of-range parameter, malformed config, violated precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The dynamics are unstable (divergence, non-Hurwitz drift, Floquet
/// multiplier outside the unit disk, parametric resonance).
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what, double achieved = 0.0)
      : Error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace optosqueeze
