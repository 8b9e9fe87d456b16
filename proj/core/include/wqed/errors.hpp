#pragma once

#include <stdexcept>

namespace wqed {

// Thrown when an integration guard trips (step-size accuracy bound, causal
// padding, divergence to non-finite values) or an iterative solver fails to
// converge. Contract violations on inputs throw std::invalid_argument instead.
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace wqed
