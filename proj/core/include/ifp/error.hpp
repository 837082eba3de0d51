#pragma once

#include <stdexcept>
#include <string>

namespace ifp {

/// Broad failure category, used by the CLI to pick an exit code.
enum class ErrorKind {
  Validation,  ///< bad input or violated precondition
  Numerical,   ///< the algorithm ran but did not produce an answer
};

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Stable machine-readable identifier, e.g. "AssumptionViolation".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

#define IFP_DEFINE_ERROR(Name, Kind)                                    \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(Kind, #Name, what) {} \
  }

IFP_DEFINE_ERROR(ModelValidation, ErrorKind::Validation);
IFP_DEFINE_ERROR(ParamValidation, ErrorKind::Validation);
IFP_DEFINE_ERROR(AssumptionViolation, ErrorKind::Validation);
IFP_DEFINE_ERROR(PreconditionViolation, ErrorKind::Validation);
IFP_DEFINE_ERROR(GridMismatch, ErrorKind::Validation);
IFP_DEFINE_ERROR(NonFiniteEntry, ErrorKind::Validation);
IFP_DEFINE_ERROR(NoSolution, ErrorKind::Numerical);
IFP_DEFINE_ERROR(NoRoot, ErrorKind::Numerical);
IFP_DEFINE_ERROR(NonFiniteExpectation, ErrorKind::Numerical);
IFP_DEFINE_ERROR(InsufficientTail, ErrorKind::Numerical);
IFP_DEFINE_ERROR(ExplosionDetected, ErrorKind::Numerical);

#undef IFP_DEFINE_ERROR

}  // namespace ifp
