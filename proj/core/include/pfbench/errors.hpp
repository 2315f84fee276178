#pragma once

#include <stdexcept>
#include <string>

namespace pfb {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A domain-type invariant or precondition was violated.
struct ValidationError : Error {
    using Error::Error;
};

/// File or process I/O failed (missing file, bad format, subprocess failure).
struct IoError : Error {
    using Error::Error;
};

/// Experiment configuration is malformed or references missing resources.
struct ConfigError : Error {
    using Error::Error;
};

/// External imputer did not answer within the configured deadline.
struct TimeoutError : IoError {
    using IoError::IoError;
};

}  // namespace pfb
