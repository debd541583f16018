#pragma once

#include <stdexcept>
#include <string>

namespace nco {

// Structural misuse: mixing elements of different algebras, shape mismatches.
struct structural_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Mathematical precondition violated (non-PSD input, p < 1, norm too large, ...).
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// An iteration failed to converge or a bracket could not be established.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nco
