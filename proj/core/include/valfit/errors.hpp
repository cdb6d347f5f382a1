#pragma once

#include <stdexcept>

namespace valfit {

// Thrown when a performance value falls outside its criterion scale, or a
// marginal is evaluated outside [lower, upper].
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an operation requires a capability the model does not have
// (e.g. category assignment on a model without thresholds).
struct ModeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by the semidefinite Cholesky when a pivot is negative beyond
// tolerance.
struct NotPsdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by the conic problem builder on malformed input (bad block index,
// entry out of range, duplicate finalization...).
struct BuildError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a fit specification is internally inconsistent (even degree
// with a global certificate, continuity order >= degree, ...).
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a solver solution cannot be turned into a valid model
// (normalization broken beyond tolerance, certificate mismatch, ...).
struct ExtractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by rank metrics when the two rankings do not cover the same set of
// alternatives.
struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on malformed external files (JSON/CSV parse or schema problems).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace valfit
