#pragma once

#include <stdexcept>
#include <string>

namespace latentscope {

/// Invalid input, configuration, or malformed file. Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime failure (numerical blowup, I/O failure). Maps to CLI exit code 1.
class RuntimeFailure : public std::runtime_error {
 public:
  explicit RuntimeFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace latentscope
