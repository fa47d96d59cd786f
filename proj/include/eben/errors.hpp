#pragma once

#include <stdexcept>
#include <string>

namespace eben {

// Error taxonomy. Everything thrown by this library derives from Error, so
// callers can catch one type at the boundary and map it to an exit code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad argument values: out-of-range parameters, mismatched lengths.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Tensor/kernel shape inconsistencies.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (WAV headers, weight files, manifests).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Recognized but unsupported encodings or layouts.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Filter-bank design failures (insufficient taps, optimization failure).
class DesignError : public Error {
 public:
  using Error::Error;
};

// Inputs that make the requested quantity meaningless (all-zero reference,
// fully masked spectra, all-silent signals).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Weight-store loading problems: missing entries, shape mismatches, bad CRC.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Inconsistent model configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace eben
