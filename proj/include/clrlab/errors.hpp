#pragma once

#include <stdexcept>
#include <string>

namespace clrlab {

// Argument outside the mathematical domain of a function (r <= 0 for K_nu, t <= 0 for kernels, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical stage failed: quadrature did not converge, a factorization broke down, a size cap was hit.
// The stage label travels with the error so the CLI can report where the pipeline stopped.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// An asserted inequality or identity did not hold.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace clrlab
