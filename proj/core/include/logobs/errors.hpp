// Error types thrown across the library. Each names the violated contract;
// the message carries the offending values.
#pragma once

#include <stdexcept>
#include <string>

namespace logobs {

#define LOGOBS_DEFINE_ERROR(Name)                           \
  struct Name : std::runtime_error {                        \
    explicit Name(const std::string& msg)                   \
        : std::runtime_error(std::string(#Name ": ") + msg) {} \
  }

// Geometry / field access
LOGOBS_DEFINE_ERROR(OutOfDomain);
LOGOBS_DEFINE_ERROR(GridTooSmall);
LOGOBS_DEFINE_ERROR(BallOutsideDomain);
LOGOBS_DEFINE_ERROR(DomainTooSmall);

// Scalar function domains
LOGOBS_DEFINE_ERROR(RadiusOutOfRange);
LOGOBS_DEFINE_ERROR(NegativeInput);

// Solver
LOGOBS_DEFINE_ERROR(BoundaryMismatch);
LOGOBS_DEFINE_ERROR(NegativeField);
LOGOBS_DEFINE_ERROR(NonConvergence);
LOGOBS_DEFINE_ERROR(DivergingEnergy);

// Free boundary
LOGOBS_DEFINE_ERROR(EmptyFreeBoundary);
LOGOBS_DEFINE_ERROR(NotAFreeBoundaryPoint);
LOGOBS_DEFINE_ERROR(TooFewPoints);

// Decay fitting
LOGOBS_DEFINE_ERROR(NonPositiveEnergyGap);

// 1D oracle
LOGOBS_DEFINE_ERROR(SeedTooLarge);
LOGOBS_DEFINE_ERROR(BlowThrough);
LOGOBS_DEFINE_ERROR(OutOfRange);

// CLI / IO
LOGOBS_DEFINE_ERROR(MissingInput);
LOGOBS_DEFINE_ERROR(ConfigError);

#undef LOGOBS_DEFINE_ERROR

}  // namespace logobs
