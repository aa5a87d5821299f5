#pragma once

#include <stdexcept>
#include <string>

namespace embedlab {

// Bad input data or a violated precondition. The CLI maps these to exit 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A broken internal invariant. The CLI maps these to exit 3.
class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-fatal diagnostics (dropped documents, clamped dimensions, ...).
// Always written to stderr so stdout stays byte-stable.
void warn(const std::string& msg);

}  // namespace embedlab
