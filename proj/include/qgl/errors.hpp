#pragma once

#include <stdexcept>
#include <string>

namespace qgl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QGL_DEFINE_ERROR(Name)            \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// numkit
QGL_DEFINE_ERROR(NonHermitianInput);
QGL_DEFINE_ERROR(Overflow);
QGL_DEFINE_ERROR(SingularNegativePower);
QGL_DEFINE_ERROR(DimensionMismatch);

// model
QGL_DEFINE_ERROR(TooLarge);
QGL_DEFINE_ERROR(RangeTooSmall);

// oft
QGL_DEFINE_ERROR(UnsupportedFilter);
QGL_DEFINE_ERROR(UnroundedHamiltonian);

// generator
QGL_DEFINE_ERROR(IncompatibleSpec);
QGL_DEFINE_ERROR(QuadratureFailure);
QGL_DEFINE_ERROR(RatioViolation);

// discriminant
QGL_DEFINE_ERROR(SingularState);
QGL_DEFINE_ERROR(SymmetryViolation);
QGL_DEFINE_ERROR(PreconditionBetaMu);

// dynamics
QGL_DEFINE_ERROR(DegenerateKernel);
QGL_DEFINE_ERROR(NotMixed);
QGL_DEFINE_ERROR(PreconditionFailed);

// circuits
QGL_DEFINE_ERROR(NonUnitaryCompletion);
QGL_DEFINE_ERROR(NonUnitaryJumps);
QGL_DEFINE_ERROR(EigvecDistTooLarge);

// cli
QGL_DEFINE_ERROR(ConfigError);
QGL_DEFINE_ERROR(InstanceError);

#undef QGL_DEFINE_ERROR

}  // namespace qgl
