// Exception types thrown across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace pdwg {

/// Base class of every error raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// Mesh construction or validation failure (non-conforming topology,
/// degenerate triangles, inconsistent subdomain/interface tags, bad file).
class MeshError : public Error {
public:
  using Error::Error;
};

/// Requested quadrature exactness outside the supported family.
class QuadratureError : public Error {
public:
  using Error::Error;
};

/// Ill-conditioned or singular local system (mass matrices, projections).
class NumericsError : public Error {
public:
  using Error::Error;
};

/// Global linear solve failure; carries the failing pivot index when known.
class SolverError : public Error {
public:
  explicit SolverError(const std::string& what_arg, int pivot_index = -1)
      : Error(what_arg), pivot_index_(pivot_index) {}
  int pivot_index() const { return pivot_index_; }

private:
  int pivot_index_;
};

/// Invalid problem description (config file, data/tag mismatch, flags).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Malformed coefficient expression text.
class ExpressionError : public Error {
public:
  using Error::Error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace pdwg
