#pragma once

#include <stdexcept>
#include <string>

namespace tfseg {

// Bad user input: missing files, malformed formats, violated preconditions.
// The CLI maps this to exit code 1; any other exception is an internal
// error and maps to exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tfseg
