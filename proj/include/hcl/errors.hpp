#pragma once

#include <stdexcept>
#include <string>

namespace hcl {

// Base of everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

// Bad or inconsistent input. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

#define HCL_DECLARE_ERROR(Name, Base)                          \
  class Name : public Base {                                   \
   public:                                                     \
    explicit Name(const std::string& what) : Base(what) {}     \
    const char* kind() const noexcept override { return #Name; } \
  };

HCL_DECLARE_ERROR(ParseError, ValidationError)
HCL_DECLARE_ERROR(BoundarySquareNonzero, ValidationError)
HCL_DECLARE_ERROR(Disconnected, ValidationError)
HCL_DECLARE_ERROR(GapViolated, ValidationError)
HCL_DECLARE_ERROR(NotPositivelyAcyclic, ValidationError)
HCL_DECLARE_ERROR(NotInjective, ValidationError)
HCL_DECLARE_ERROR(NotATree, ValidationError)
HCL_DECLARE_ERROR(LevelMismatch, ValidationError)
HCL_DECLARE_ERROR(NotClosedUnderFaces, ValidationError)
HCL_DECLARE_ERROR(BadCoordinates, ValidationError)
HCL_DECLARE_ERROR(NonpositiveBeta, ValidationError)
HCL_DECLARE_ERROR(NotSmall, ValidationError)
HCL_DECLARE_ERROR(NotGood, ValidationError)
HCL_DECLARE_ERROR(NotACycle, ValidationError)
HCL_DECLARE_ERROR(BadFrame, ValidationError)
HCL_DECLARE_ERROR(EpsilonTooLarge, ValidationError)
HCL_DECLARE_ERROR(StepTooLarge, ValidationError)

// Internal failures: an invariant that should hold did not.
HCL_DECLARE_ERROR(LiftObstruction, Error)
HCL_DECLARE_ERROR(QuadratureNoConvergence, Error)

#undef HCL_DECLARE_ERROR

}  // namespace hcl
