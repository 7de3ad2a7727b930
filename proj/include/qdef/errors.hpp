#pragma once

#include <stdexcept>
#include <string>

namespace qdef {

/// Argument outside the mathematical domain of an operation (pole, log of a
/// non-positive number, divergent branch of a power).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters fall in a dynamical regime the operation does not cover,
/// e.g. asking for a period when gamma_q * A >= 1.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vanishing denominator in a deformed derivative or q-subtraction.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quantum number above the last bound state.
class UnboundStateError : public std::out_of_range {
 public:
  UnboundStateError(int n, int n_max)
      : std::out_of_range("state n=" + std::to_string(n) +
                          " is not bound; highest bound state is n_max=" +
                          std::to_string(n_max)),
        n_(n),
        n_max_(n_max) {}

  int n() const noexcept { return n_; }
  int n_max() const noexcept { return n_max_; }

 private:
  int n_;
  int n_max_;
};

/// Integrator or quadrature failure (guard band hit, no convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: configuration file, CLI flags, table shape.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qdef
