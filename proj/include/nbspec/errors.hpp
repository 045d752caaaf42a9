#pragma once

#include <stdexcept>
#include <string>

namespace nbspec {

// Root of every error raised by the library. The CLI maps `Error` subclasses
// that describe bad input to exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define NBSPEC_DEFINE_ERROR(Name)              \
    class Name : public Error {                \
    public:                                    \
        using Error::Error;                    \
    }

// graphgen
NBSPEC_DEFINE_ERROR(ParityError);
NBSPEC_DEFINE_ERROR(InfeasibleError);
NBSPEC_DEFINE_ERROR(DivisibilityError);
NBSPEC_DEFINE_ERROR(RetryExhausted);

// spectral
NBSPEC_DEFINE_ERROR(ConvergenceError);
NBSPEC_DEFINE_ERROR(DegenerateError);
NBSPEC_DEFINE_ERROR(TrivialEigenvalueError);
NBSPEC_DEFINE_ERROR(ZeroVectorError);

// measures
NBSPEC_DEFINE_ERROR(DomainError);
NBSPEC_DEFINE_ERROR(IntegrationError);

// rsbm
NBSPEC_DEFINE_ERROR(StructureError);
NBSPEC_DEFINE_ERROR(AmbiguityError);
NBSPEC_DEFINE_ERROR(MultiplicityError);
NBSPEC_DEFINE_ERROR(PreconditionError);

// verify
NBSPEC_DEFINE_ERROR(SingularError);
NBSPEC_DEFINE_ERROR(NearSingularError);

// io
NBSPEC_DEFINE_ERROR(ParseError);
NBSPEC_DEFINE_ERROR(InvariantError);

#undef NBSPEC_DEFINE_ERROR

}  // namespace nbspec
