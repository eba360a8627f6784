#pragma once

#include <stdexcept>

namespace mrfq {

// Argument violates a documented precondition.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Request exceeds what the implementation supports (e.g. exact enumeration
// past the feasible vertex count).
struct UnsupportedSize : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Configuration that cannot produce a valid model or experiment.
struct InvalidConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal simulator consistency violation (ancilla not restored, broken
// bijection, ledger mismatch).
struct SimError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace mrfq
