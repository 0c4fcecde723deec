#pragma once

#include <stdexcept>

namespace fracton {

// Bad arguments or malformed inputs. The CLI maps this to exit code 2.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Solver, quadrature or measurement failures. The CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fracton
