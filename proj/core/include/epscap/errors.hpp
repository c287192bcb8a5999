#pragma once

#include <stdexcept>
#include <string>

namespace epscap {

/// Channel spec file is malformed or violates an invariant.
class SpecParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A numerical solver could not certify its result within budget.
class SolverFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A configured enumeration or size cap was exceeded.
class CapExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace epscap
