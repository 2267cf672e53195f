#pragma once

#include <stdexcept>
#include <string>

namespace mvf {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input documents (germ/mixed/recipe files).
class parse_error : public error {
 public:
  explicit parse_error(const std::string& what) : error(what) {}
};

/// A numeric operation was called outside its admissible set
/// (on V_G, on Sing G, off the Milnor set, wrong dimension, ...).
class domain_error : public error {
 public:
  explicit domain_error(const std::string& what) : error(what) {}
};

}  // namespace mvf
