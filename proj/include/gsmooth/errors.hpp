#pragma once

#include <stdexcept>
#include <string>

namespace gsmooth {

// An operation needs an oracle or metadata the caller did not provide
// (missing Hessian, missing f*, missing monitor inputs).
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The objective returned a non-finite value at a point where it must be finite.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsmooth
