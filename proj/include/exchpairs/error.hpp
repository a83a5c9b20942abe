#pragma once

#include <stdexcept>
#include <string>

namespace exchpairs {

// Thrown when an operation needs more samples than it was given.
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an input vector cannot be rescaled or normalized (e.g. constant
// input with a nonzero target spread).
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when example generation keeps producing constant or non-finite
// samples after the retry budget is exhausted.
struct DegenerateExampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a metric is undefined for the given inputs (e.g. AUROC with a
// single class present).
struct UndefinedMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an optimizer or training loop produces non-finite state.
struct TrainingDivergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on malformed files, missing fields, or shape mismatches during I/O.
struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an internal computation violates its own postcondition (e.g. a
// mechanism produces non-finite output despite domain clamping).
struct InternalConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace exchpairs
