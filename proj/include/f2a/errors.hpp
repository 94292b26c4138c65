#pragma once

#include <stdexcept>
#include <string>

namespace f2a {

// Base class for all library errors. CLI maps subclasses onto exit codes:
// data-shaped failures exit 2, everything else exits 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two images that must agree in shape do not.
struct InvalidPairError : Error {
    using Error::Error;
};

// Pixel values outside the [0,1] domain.
struct RangeError : Error {
    using Error::Error;
};

// Crop out of bounds or otherwise impossible augmentation.
struct AugmentationError : Error {
    using Error::Error;
};

// Tensor shape violates a network contract (e.g. dims not divisible by 32).
struct ShapeError : Error {
    using Error::Error;
};

// Non-finite values where finite ones are required.
struct NumericError : Error {
    using Error::Error;
};

// Unreadable/corrupt files, malformed manifests, broken images.
struct DataError : Error {
    using Error::Error;
};

// Checkpoint/weight-archive problems: corrupt file, missing tensor,
// architecture mismatch.
struct CheckpointError : Error {
    using Error::Error;
};

} // namespace f2a
