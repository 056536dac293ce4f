#pragma once

#include <stdexcept>
#include <string>

namespace rotor {

// Input that does not describe a valid instance.
struct InvalidInstance : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Valid instance outside the class a solver handles (not tree-like, not simple, ...).
struct SolverRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A step or search bound was exhausted.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rotor
