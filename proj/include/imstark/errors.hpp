#pragma once

#include <stdexcept>
#include <string>

namespace imstark {

// Error taxonomy, mirrored by the CLI exit codes:
//   0 success, 2 ConfigError, 3 ComputationError, 4 InvariantFailure.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ComputationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A result violated one of the library's self-consistency checks.
struct InvariantFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergence : ComputationError {
    using ComputationError::ComputationError;
};
struct Degenerate : ComputationError {
    using ComputationError::ComputationError;
};
struct IllConditioned : ComputationError {
    using ComputationError::ComputationError;
};
struct NoSignChange : ComputationError {
    using ComputationError::ComputationError;
};
struct OutOfRange : ComputationError {
    using ComputationError::ComputationError;
};
struct NotNormalized : ComputationError {
    using ComputationError::ComputationError;
};
struct DegenerateProfile : ComputationError {
    using ComputationError::ComputationError;
};
struct LevelNotCrossed : ComputationError {
    using ComputationError::ComputationError;
};
struct WindowTooShort : ComputationError {
    using ComputationError::ComputationError;
};
struct UnpairedEigenvalue : ComputationError {
    using ComputationError::ComputationError;
};
struct StepSizeUnderflow : ComputationError {
    using ComputationError::ComputationError;
};
struct NonPositiveData : ComputationError {
    using ComputationError::ComputationError;
};
struct UnsupportedTable : ComputationError {
    using ComputationError::ComputationError;
};
struct IoFailure : ComputationError {
    using ComputationError::ComputationError;
};

}  // namespace imstark
