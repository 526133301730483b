#pragma once
#include <stdexcept>

namespace qrf {

// Bad configuration or ill-formed input (CLI exit code 2).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated numeric budget: clipped support, stability limit, drifted norm
// (CLI exit code 3).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qrf
