#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

/// Base of every error raised by the toolkit. `kind()` is a stable
/// machine-readable tag used in structured error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define LIOUVILLE_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(tag, what) {}            \
  }

LIOUVILLE_DEFINE_ERROR(InputError, "input");
LIOUVILLE_DEFINE_ERROR(SingularMatrixError, "singular_matrix");
LIOUVILLE_DEFINE_ERROR(NonintegrableError, "nonintegrable");
LIOUVILLE_DEFINE_ERROR(StiffnessError, "stiffness");
LIOUVILLE_DEFINE_ERROR(InconsistentTailError, "inconsistent_tail");
LIOUVILLE_DEFINE_ERROR(PreconditionError, "precondition");
LIOUVILLE_DEFINE_ERROR(NonconvergenceError, "nonconvergence");
LIOUVILLE_DEFINE_ERROR(SingularityError, "singularity");
LIOUVILLE_DEFINE_ERROR(ConfigurationError, "configuration");
LIOUVILLE_DEFINE_ERROR(DegenerateConfigurationError, "degenerate_configuration");
LIOUVILLE_DEFINE_ERROR(MergeError, "merge");
LIOUVILLE_DEFINE_ERROR(RegimeError, "wrong_regime");
LIOUVILLE_DEFINE_ERROR(ResolutionError, "resolution");
LIOUVILLE_DEFINE_ERROR(AmplitudeError, "amplitude");
LIOUVILLE_DEFINE_ERROR(SeparationError, "separation");

#undef LIOUVILLE_DEFINE_ERROR

}  // namespace liouville
