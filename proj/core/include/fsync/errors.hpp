#pragma once

#include <stdexcept>
#include <string>

namespace fisher {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InvalidDistribution : Error { using Error::Error; };
struct NonConvergent : Error { using Error::Error; };

struct InvalidPattern : Error { using Error::Error; };
struct NotPowerOfTwo : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct PatternNotIndependent : Error { using Error::Error; };

struct AssignmentIncomplete : Error { using Error::Error; };
struct MismatchedShapes : Error { using Error::Error; };

struct GridMismatch : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct NonPositiveDensity : Error { using Error::Error; };
struct NonPositiveDefinite : Error { using Error::Error; };

struct ConfigError : Error { using Error::Error; };

}  // namespace fisher
