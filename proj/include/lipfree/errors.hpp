#pragma once

#include <stdexcept>
#include <string>

namespace lipfree {

/// A configured size cap (ball elements, support size, grid size) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A floating-point solver could not certify its answer to the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request outside the implemented parameter range (e.g. sphere dimension d != 3).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lipfree
