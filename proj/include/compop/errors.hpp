#pragma once

#include <stdexcept>
#include <string>

namespace compop {

// Thrown when a requested dense computation exceeds the configured
// resource guard (default 16e6 matrix entries). CLI maps this to exit 2.
struct ResourceLimitError : std::runtime_error {
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a numerical backend fails to converge or produces an
// unusable result. CLI maps this to exit 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace compop
