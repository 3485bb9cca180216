#pragma once

#include <stdexcept>
#include <string>

namespace hcmlab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Evaluation hit a pole (or a value indistinguishable from one).
class PoleError : public std::domain_error {
 public:
  explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

/// A quadrature or series did not reach its tolerance within its budget.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what)
      : std::runtime_error(what) {}
};

/// The input does not satisfy the hypothesis a check relies on.
class HypothesisViolated : public std::domain_error {
 public:
  explicit HypothesisViolated(const std::string& what)
      : std::domain_error(what) {}
};

}  // namespace hcmlab
