#pragma once

#include <stdexcept>
#include <string>

namespace magbill {

/// Base of every failure raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MAGBILL_DEFINE_ERROR(Name)       \
    class Name : public Error {          \
    public:                              \
        using Error::Error;              \
    }

// boundary
MAGBILL_DEFINE_ERROR(ZeroGradient);
MAGBILL_DEFINE_ERROR(QuadratureFailure);
// stepper
MAGBILL_DEFINE_ERROR(VelocityOutOfRange);
MAGBILL_DEFINE_ERROR(RootFindFailure);
MAGBILL_DEFINE_ERROR(DegenerateTangency);
// analysis
MAGBILL_DEFINE_ERROR(ProbeFailure);
MAGBILL_DEFINE_ERROR(NoSecondIntersection);
// cli / output
MAGBILL_DEFINE_ERROR(InvalidGeometry);
MAGBILL_DEFINE_ERROR(InvalidConfig);
MAGBILL_DEFINE_ERROR(IoError);

#undef MAGBILL_DEFINE_ERROR

}  // namespace magbill
