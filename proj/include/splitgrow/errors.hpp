#pragma once

#include <stdexcept>
#include <string>

namespace splitgrow {

// Base of every error raised by the library. Callers that only care about
// "something is wrong with the model or run" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPLITGROW_DEFINE_ERROR(Name)          \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  };

SPLITGROW_DEFINE_ERROR(InvalidParameter)
SPLITGROW_DEFINE_ERROR(UnknownTail)
SPLITGROW_DEFINE_ERROR(RegimeError)
SPLITGROW_DEFINE_ERROR(NoConvergence)
SPLITGROW_DEFINE_ERROR(RankDeficient)
SPLITGROW_DEFINE_ERROR(NonPositive)
SPLITGROW_DEFINE_ERROR(DegeneracyError)
SPLITGROW_DEFINE_ERROR(InvalidDegree)
SPLITGROW_DEFINE_ERROR(BoundViolation)
SPLITGROW_DEFINE_ERROR(ReductionInvalid)
SPLITGROW_DEFINE_ERROR(DivisionByZero)
SPLITGROW_DEFINE_ERROR(ConfigError)

#undef SPLITGROW_DEFINE_ERROR

}  // namespace splitgrow
