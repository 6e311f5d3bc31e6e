#pragma once
#include <stdexcept>
#include <string>

namespace nkji {

// Bad inputs: parameters, shapes, files. Mapped to exit code 1 by the CLI.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& m) : std::invalid_argument(m) {}
};

// Numerical or runtime failure. Mapped to exit code 2 by the CLI.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& m) : std::runtime_error(m) {}
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace nkji
