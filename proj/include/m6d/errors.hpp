#pragma once

#include <stdexcept>
#include <string>

namespace m6d {

// Typed failure conditions. Each maps to one contract-level error so callers
// can select on type rather than parse messages.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonPositiveDepth : Error { using Error::Error; };
struct TooFewVertices : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };
struct DegenerateAABB : Error { using Error::Error; };
struct DegenerateConfiguration : Error { using Error::Error; };
struct NoConsensus : Error { using Error::Error; };
struct IndivisibleResolution : Error { using Error::Error; };
struct BadDim : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };
struct FormatViolation : Error { using Error::Error; };
struct MissingParameter : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

struct NonFiniteLoss : Error {
  explicit NonFiniteLoss(const std::string& what, long step_index)
      : Error(what), step(step_index) {}
  long step;
};

}  // namespace m6d
