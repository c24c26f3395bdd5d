#pragma once

#include <cstdint>

namespace qtori {

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr std::uint64_t kDefaultMaxCells = 100'000'000;

// Knobs shared by every numerical routine. Passed explicitly rather than kept
// global so that concurrent callers can use different tolerances.
struct Settings {
  double tol = kDefaultTolerance;
  std::uint64_t max_cells = kDefaultMaxCells;
};

}  // namespace qtori
