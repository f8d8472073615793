#pragma once

#include <stdexcept>
#include <string>

namespace pic {

// Error taxonomy. The CLI maps ConfigError to exit code 2 and every other
// failure to exit code 1.

// Bad configuration value or inconsistent setup; message names the key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Position handed to a grid operation outside [0,l) in some dimension.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Device arena / region capacity exceeded. Raised at startup, never mid-copy.
struct AllocError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Kernel produced a non-finite value; message identifies the particle index.
struct NumericalFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A particle crossed more than one subdomain slab in a single step.
struct CflViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Queue executor failed; the owning cycle aborts and the state is invalid.
struct EngineFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Nonsensical input to a benchmark metric (non-positive time etc.).
struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pic
