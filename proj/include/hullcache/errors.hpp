#pragma once

#include <stdexcept>
#include <string>

namespace hullcache {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

/// Coplanar, collinear or coincident input where a solid hull is required.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

/// Result does not fit 16-bit indexing (0xFFFF is reserved as sentinel).
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace hullcache
