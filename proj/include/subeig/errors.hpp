#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subeig {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class NotHermitian : public Error {
public:
  using Error::Error;
};

/// LU elimination met a pivot at or below the singularity tolerance.
class SingularMatrix : public Error {
public:
  SingularMatrix(std::size_t pivot, const std::string& what)
      : Error(what), pivot_(pivot) {}

  std::size_t pivot_index() const noexcept { return pivot_; }

private:
  std::size_t pivot_;
};

/// diag(A) - lambda has a vanishing entry.
class SingularDiagonal : public Error {
public:
  SingularDiagonal(std::size_t index, const std::string& what)
      : Error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

/// A normalization constant (tau or eta) of a correction equation is undefined.
class Breakdown : public Error {
public:
  using Error::Error;
};

/// The expansion vector has no component outside the current basis.
class LinearlyDependent : public Error {
public:
  using Error::Error;
};

} // namespace subeig
