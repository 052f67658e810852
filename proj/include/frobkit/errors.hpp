#pragma once

#include <stdexcept>
#include <string>

namespace frobkit {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Metric (or pencil member) not invertible at the evaluation point.
struct SingularMetric : std::runtime_error {
  explicit SingularMetric(const std::string& what) : std::runtime_error(what) {}
};

// Coordinate-change Jacobian not invertible at the evaluation point.
struct SingularJacobian : std::runtime_error {
  explicit SingularJacobian(const std::string& what) : std::runtime_error(what) {}
};

// Euler multiplication operator not invertible at the evaluation point.
struct SingularL : SingularMetric {
  explicit SingularL(const std::string& what) : SingularMetric(what) {}
};

// Trajectory parameter hit a singular point of the ODE system.
struct SingularPoint : std::runtime_error {
  explicit SingularPoint(const std::string& what) : std::runtime_error(what) {}
};

struct CoincidentCoordinates : std::runtime_error {
  explicit CoincidentCoordinates(const std::string& what) : std::runtime_error(what) {}
};

// Integration step too coarse: conserved quantity drifted past its guard.
struct StepTooLarge : std::runtime_error {
  explicit StepTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// Requested closed-form data (flat chart, prepotential) has no branch for
// the family's (d, constants) combination.
struct BranchError : std::runtime_error {
  explicit BranchError(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownFamily : std::runtime_error {
  explicit UnknownFamily(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Run configuration violates its invariants (non-positive tolerance, ...).
struct InvalidConfig : std::invalid_argument {
  explicit InvalidConfig(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace frobkit
