#pragma once

#include <stdexcept>
#include <string>

namespace hopnet {

// Base for all domain errors. kind() is a stable short tag used by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define HOPNET_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& message) : Error(tag, message) {}   \
  }

HOPNET_DEFINE_ERROR(InvalidPairError, "invalid-pair");
HOPNET_DEFINE_ERROR(InvalidPermutationError, "invalid-permutation");
HOPNET_DEFINE_ERROR(CapacityError, "capacity");
HOPNET_DEFINE_ERROR(FamilyParamError, "family-param");
HOPNET_DEFINE_ERROR(DimensionError, "dimension-mismatch");
HOPNET_DEFINE_ERROR(LayoutError, "layout");
HOPNET_DEFINE_ERROR(PreconditionError, "precondition");
HOPNET_DEFINE_ERROR(DivergenceError, "divergence");
HOPNET_DEFINE_ERROR(InfeasibleError, "infeasible");
HOPNET_DEFINE_ERROR(DirectionError, "undefined-direction");
HOPNET_DEFINE_ERROR(ParseError, "parse");
HOPNET_DEFINE_ERROR(IoError, "io");

#undef HOPNET_DEFINE_ERROR

}  // namespace hopnet
