#pragma once

#include <stdexcept>
#include <string>

namespace calf {

// Bad input data or configuration. Mapped to CLI exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (non-finite values, failed decomposition, divergence).
// Mapped to CLI exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A calf appearing on both sides of a train/test or train/validation
// boundary. Mapped to CLI exit code 4.
struct LeakageError : std::runtime_error {
  explicit LeakageError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kValidation = 2;
inline constexpr int kNumerical = 3;
inline constexpr int kLeakage = 4;
}  // namespace exit_code

}  // namespace calf
