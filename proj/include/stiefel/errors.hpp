#pragma once

#include <stdexcept>
#include <string>

namespace stiefel {

/// Malformed or out-of-domain arguments (shape mismatch, non-finite entries,
/// points off the manifold beyond the repair tolerance, ...).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string &what) : std::invalid_argument(what) {}
};

/// The requested quantity is only defined under hypotheses that do not hold
/// (e.g. a bound stated for odd p only).
class NotApplicable : public std::domain_error {
 public:
  explicit NotApplicable(const std::string &what) : std::domain_error(what) {}
};

/// A numerical procedure produced NaN/Inf or could not bracket a root.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace stiefel
