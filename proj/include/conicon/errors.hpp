#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conicon {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CONICON_DEFINE_ERROR(Name)            \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

// numeric
CONICON_DEFINE_ERROR(InvalidPrecision);
CONICON_DEFINE_ERROR(ZeroPolynomial);
CONICON_DEFINE_ERROR(NonConvergence);
CONICON_DEFINE_ERROR(DegreeTooLarge);

// expr
CONICON_DEFINE_ERROR(DivisionByZero);

// conic
CONICON_DEFINE_ERROR(NotAConic);
CONICON_DEFINE_ERROR(CircleHasNoDirectrix);
CONICON_DEFINE_ERROR(DegenerateInput);
CONICON_DEFINE_ERROR(CoincidentObjects);
CONICON_DEFINE_ERROR(EliminationDegenerate);
CONICON_DEFINE_ERROR(FormParameterMismatch);
CONICON_DEFINE_ERROR(OrientationClassMismatch);

// planner
CONICON_DEFINE_ERROR(DegenerateGadget);
CONICON_DEFINE_ERROR(ClassUnreachable);
CONICON_DEFINE_ERROR(InvalidFixedConic);

// executor
CONICON_DEFINE_ERROR(SelectionAmbiguous);
CONICON_DEFINE_ERROR(NoMatch);
CONICON_DEFINE_ERROR(NoIntersection);
CONICON_DEFINE_ERROR(MalformedProgram);

// cli / trace
CONICON_DEFINE_ERROR(TraceFormatError);

#undef CONICON_DEFINE_ERROR

/// Parse failure; `position` is the 0-based offset into the input text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace conicon
