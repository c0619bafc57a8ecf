#pragma once

#include <stdexcept>
#include <string>

namespace roadplan {

// Absolute tolerance for latency/flow/price comparisons, SI units.
inline constexpr double kTolerance = 1e-9;

inline constexpr const char* kVersion = "0.1.0";

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Physical model
struct LatencyBelowFreeFlow : Error { using Error::Error; };
struct AutonomousFlowInfeasible : Error { using Error::Error; };

// Planning
struct ZeroDemand : Error { using Error::Error; };
struct Infeasible : Error { using Error::Error; };
struct SearchSpaceTooLarge : Error { using Error::Error; };
struct PriceCapExceeded : Error { using Error::Error; };
struct NotImprovable : Error { using Error::Error; };
struct ZeroPriceWeight : Error { using Error::Error; };

// Learning
struct DegenerateObservations : Error { using Error::Error; };

// Configuration / CLI
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct InvalidAnswer : Error { using Error::Error; };

}  // namespace roadplan
