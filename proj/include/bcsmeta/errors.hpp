#pragma once

#include <stdexcept>
#include <string>

namespace bcsmeta {

/// Argument outside the domain of an operation (negative time, eps >= 1/2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Eigendecomposition of a Hermitian matrix with (numerically) coincident eigenvalues.
class DegenerateFrame : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bisection failed to reach the requested residual. Indicates a bug, not bad input.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested an exit time for an observable that does not relax metastably.
class NoExitTime : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested a metastability quantity in the normal phase (lambda = 0).
class NoMetastability : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bcsmeta
