#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace susydec {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// potential
struct NoStableEquilibrium : Error {
    using Error::Error;
};
struct UnstableEquilibrium : Error {
    using Error::Error;
};
struct NotAnEquilibrium : Error {
    using Error::Error;
};

// dsl
struct ParseError : Error {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& msg)
        : Error(msg), position(pos) {}
};
struct NonPolynomialError : ParseError {
    using ParseError::ParseError;
};

// grid
struct BoxTooSmall : Error {
    using Error::Error;
};
struct GridMismatch : Error {
    using Error::Error;
};

// cli
struct ConfigError : Error {
    using Error::Error;
};
struct DeviationError : Error {
    using Error::Error;
};
struct ConvergenceOrderError : Error {
    using Error::Error;
};

}  // namespace susydec
