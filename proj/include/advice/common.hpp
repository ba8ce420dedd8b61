#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace advice {

using State = std::uint32_t;
using Action = std::uint32_t;

// Steps are 0-based throughout the library: h = 0 is the first decision and
// value tables carry one extra terminal layer at h = H.

inline constexpr double kHumanRowTolerance = 1e-12;
inline constexpr double kProbabilityTolerance = 1e-10;
inline constexpr double kValueTolerance = 1e-9;

// Q-values closer than this count as tied; the lowest action index wins and
// defer (index A) is ordered last.
inline constexpr double kTieTolerance = 1e-12;

/// Raised when a model violates one of its structural invariants.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace advice
