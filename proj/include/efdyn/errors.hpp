#pragma once

#include <stdexcept>
#include <string>

namespace efdyn {

class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define EFDYN_ERROR(Name)                                                  \
  class Name : public Error {                                              \
  public:                                                                  \
    explicit Name(const std::string& what) : Error(#Name, what) {}         \
  };

EFDYN_ERROR(ZeroDiscriminant)
EFDYN_ERROR(DegeneratePoint)
EFDYN_ERROR(ZeroCoordinate)
EFDYN_ERROR(PreconditionViolated)
EFDYN_ERROR(UndefinedPoint)
EFDYN_ERROR(NotApplicable)
EFDYN_ERROR(DegenerateState)
EFDYN_ERROR(NotCritical)
EFDYN_ERROR(SeriesInvalid)
EFDYN_ERROR(StepSizeUnderflow)
EFDYN_ERROR(ConfigError)

#undef EFDYN_ERROR

} // namespace efdyn
