#pragma once

#include <stdexcept>
#include <string>

namespace resim {

// Bad inputs, malformed files, broken invariants. CLI exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at runtime (integrator blow-up, belief collapse,
// degenerate contact geometry). CLI exit code 2.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace resim
