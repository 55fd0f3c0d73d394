#pragma once

#include <stdexcept>
#include <string>

namespace hmls {

/// File or stream level failure (missing file, parse error, unwritable path).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally invalid mesh or mesh query (bad index, no edges, ...).
struct MeshError : std::runtime_error {
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid parameter combination passed to an algorithm.
struct ParamError : std::invalid_argument {
  explicit ParamError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numeric failure that cannot be recovered from (empty kernel support, ...).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hmls
