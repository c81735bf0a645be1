#pragma once

#include <stdexcept>
#include <string>

namespace mlag {

// Two families, mirrored by the CLI exit codes: DomainError (bad input,
// exit 1) and NumericalError (a solver gave up, exit 2).

class DomainError : public std::runtime_error {
public:
  DomainError(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

class NumericalError : public std::runtime_error {
public:
  NumericalError(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define MLAG_DOMAIN_ERROR(Name)                                                \
  struct Name : DomainError {                                                  \
    explicit Name(const std::string& what) : DomainError(#Name, what) {}       \
  }

#define MLAG_NUMERICAL_ERROR(Name)                                             \
  struct Name : NumericalError {                                               \
    explicit Name(const std::string& what) : NumericalError(#Name, what) {}    \
  }

MLAG_DOMAIN_ERROR(MeshError);
MLAG_DOMAIN_ERROR(DimensionMismatch);
MLAG_DOMAIN_ERROR(SurfaceMismatch);
MLAG_DOMAIN_ERROR(DegreeMismatch);
MLAG_DOMAIN_ERROR(ZeroCubic);
MLAG_DOMAIN_ERROR(DegenerateNorm);
MLAG_DOMAIN_ERROR(InvalidArgument);
MLAG_DOMAIN_ERROR(ConfigError);
MLAG_DOMAIN_ERROR(BlendSignViolation);

MLAG_NUMERICAL_ERROR(NonConvergence);
MLAG_NUMERICAL_ERROR(SingularJacobian);
MLAG_NUMERICAL_ERROR(ExponentOverflow);
MLAG_NUMERICAL_ERROR(EigenFailure);
MLAG_NUMERICAL_ERROR(StallBeforeFold);
MLAG_NUMERICAL_ERROR(NoFoldDetected);
MLAG_NUMERICAL_ERROR(PathCollapse);
MLAG_NUMERICAL_ERROR(VerificationFailure);
MLAG_NUMERICAL_ERROR(BranchUnavailable);
MLAG_NUMERICAL_ERROR(StepTooLarge);
MLAG_NUMERICAL_ERROR(SolverFailure);

#undef MLAG_DOMAIN_ERROR
#undef MLAG_NUMERICAL_ERROR

} // namespace mlag
