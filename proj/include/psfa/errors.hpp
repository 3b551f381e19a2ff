#pragma once

#include <stdexcept>
#include <string>

namespace psfa {

/// Contract violation on inputs: bad dimensions, invalid parameter values,
/// malformed files. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: singular systems, non-finite objectives, non-convergent
/// fixed-point iterations. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem / parsing failure. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace psfa
