#pragma once

#include <stdexcept>
#include <string>

namespace sfwm {

// Bad inputs: units, signs, missing config fields, malformed files. CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature/decomposition breakdown: grid truncation, non-finite values. CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sfwm
