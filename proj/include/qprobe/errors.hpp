#pragma once

#include <stdexcept>
#include <string>

namespace qprobe {

// Configuration or input-file problem; maps to CLI exit code 2.
// Numerical failures stay plain std::runtime_error (exit code 3).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qprobe
