#pragma once

#include <stdexcept>
#include <string>

namespace geonet {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or unusable user input: files, CLI arguments, configuration.
// The CLI maps these to exit code 1.
struct InputError : Error {
    using Error::Error;
};

// A computation could not proceed: undefined metric, domain violation.
// The CLI maps these to exit code 2.
struct ComputeError : Error {
    using Error::Error;
};

} // namespace geonet
