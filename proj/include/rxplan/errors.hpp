#pragma once

#include <stdexcept>
#include <string>

namespace rxplan {

/// Base of every error thrown by the library. Each subclass maps to one failure
/// class that callers may want to tell apart (the CLI only distinguishes
/// rxplan::Error from everything else).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RXPLAN_DEFINE_ERROR(Name)      \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

RXPLAN_DEFINE_ERROR(ParseError);
RXPLAN_DEFINE_ERROR(ValidationError);
RXPLAN_DEFINE_ERROR(NoDataError);
RXPLAN_DEFINE_ERROR(EmptyAoiError);
RXPLAN_DEFINE_ERROR(DegenerateRangeError);
RXPLAN_DEFINE_ERROR(MissingTlError);
RXPLAN_DEFINE_ERROR(OutOfBoundsError);
RXPLAN_DEFINE_ERROR(DegenerateGeometryError);
RXPLAN_DEFINE_ERROR(InsufficientReceiversError);
RXPLAN_DEFINE_ERROR(ShapeError);
RXPLAN_DEFINE_ERROR(LayoutError);
RXPLAN_DEFINE_ERROR(InitError);
RXPLAN_DEFINE_ERROR(BudgetError);
RXPLAN_DEFINE_ERROR(DomainError);
RXPLAN_DEFINE_ERROR(InfiniteIntersectionError);
RXPLAN_DEFINE_ERROR(DivisionError);
RXPLAN_DEFINE_ERROR(EmptyLogError);

#undef RXPLAN_DEFINE_ERROR

}  // namespace rxplan
