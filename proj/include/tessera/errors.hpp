#pragma once

#include <stdexcept>
#include <string>

namespace tessera {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad parameters, unknown prompts, malformed or invalid job configs.
struct ConfigError : Error {
    using Error::Error;
};

/// Tensor shape mismatch between operands.
struct DimensionError : Error {
    using Error::Error;
};

/// Diffusion step index outside [1, T] (or [0, T] where stated).
struct StepError : Error {
    using Error::Error;
};

/// Index not a multiple of the latent upscale factor.
struct AlignmentError : Error {
    using Error::Error;
};

/// A canvas pixel not covered by any region weight.
struct CoverageError : Error {
    using Error::Error;
};

/// File read/write failures.
struct IoError : Error {
    using Error::Error;
};

} // namespace tessera
