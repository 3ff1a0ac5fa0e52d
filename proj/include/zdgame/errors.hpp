#pragma once

#include <stdexcept>

namespace zdgame {

// Malformed files, out-of-range indices, probabilities outside [0,1], bad arity.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested target or scale parameter violates a feasibility condition
// (controllability interval, b-range, zero target).
struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally or numerically degenerate case: vanishing determinant
// normalization, discount factor on the boundary of its open interval.
struct Degenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace zdgame
