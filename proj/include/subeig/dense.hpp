#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "subeig/errors.hpp"

namespace subeig {

using Scalar = std::complex<double>;

/// Dense complex vector with fixed length.
class Vector {
public:
  Vector() = default;
  explicit Vector(std::size_t n, Scalar fill = {}) : data_(n, fill) {}
  Vector(std::initializer_list<Scalar> values) : data_(values) {}
  explicit Vector(std::vector<Scalar> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Scalar& operator[](std::size_t i) { return data_[i]; }
  const Scalar& operator[](std::size_t i) const { return data_[i]; }

  Scalar* data() noexcept { return data_.data(); }
  const Scalar* data() const noexcept { return data_.data(); }

  std::span<Scalar> span() noexcept { return data_; }
  std::span<const Scalar> span() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(Scalar s);

  bool operator==(const Vector&) const = default;

private:
  std::vector<Scalar> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator-(Vector a);
Vector operator*(Scalar s, Vector a);
Vector operator*(Vector a, Scalar s);

/// x*y, conjugate-linear in the first argument.
Scalar inner(std::span<const Scalar> x, std::span<const Scalar> y);
inline Scalar inner(const Vector& x, const Vector& y) { return inner(x.span(), y.span()); }

double norm2(std::span<const Scalar> x);
inline double norm2(const Vector& x) { return norm2(x.span()); }
double norm_inf(const Vector& x);

/// x / ||x||. Throws InvalidArgument for the zero vector.
Vector normalized(const Vector& x);

/// y += a * x
void axpy(Scalar a, std::span<const Scalar> x, std::span<Scalar> y);

/// Column-major dense complex matrix.
///
/// The Hermitian flag is a checked property: mark_hermitian() verifies
/// ||A - A*||_max <= 1e-13 ||A||_max before setting it, and any mutable access
/// to the entries clears it again.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Scalar fill = {});

  /// Row-major nested initializer, e.g. {{1, 2}, {3, 4}}.
  static Matrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows);
  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& d);
  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(std::span<const Vector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) {
    hermitian_ = false;
    return data_[j * rows_ + i];
  }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  /// Unchecked read access that does not touch the Hermitian flag.
  const Scalar& at(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<const Scalar> column(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }
  std::span<Scalar> column_mut(std::size_t j) {
    hermitian_ = false;
    return {data_.data() + j * rows_, rows_};
  }
  Vector column_vector(std::size_t j) const;

  const Scalar* data() const noexcept { return data_.data(); }
  Scalar* data_mut() noexcept {
    hermitian_ = false;
    return data_.data();
  }

  /// Appends a column; rows() must match (or the matrix must be empty).
  void append_column(std::span<const Scalar> column);
  /// Grows a square matrix by one row and column, filled with zeros.
  void grow_square();

  bool is_hermitian() const noexcept { return hermitian_; }
  /// Verifies near-Hermitian structure and sets the flag; throws NotHermitian.
  void mark_hermitian();
  /// Sets the flag when the check passes; returns whether it did.
  bool detect_hermitian();

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
  bool hermitian_ = false;
};

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
Scalar trace(const Matrix& a);

Matrix adjoint(const Matrix& a);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(Scalar s, const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
/// x y*
Matrix outer(const Vector& x, const Vector& y);
/// a - shift * I
Matrix shifted(const Matrix& a, Scalar shift);

/// A x, each row summed left to right.
Vector matvec(const Matrix& a, const Vector& x);
/// A* x
Vector adjoint_matvec(const Matrix& a, const Vector& x);

struct LuOptions {
  /// Pivots with magnitude <= pivot_tol raise SingularMatrix. A negative value
  /// selects the default n * eps * ||A||_max.
  double pivot_tol = -1.0;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
Vector lu_solve(const Matrix& a, const Vector& b, LuOptions options = {});

/// log det(A) from the LU factors (principal branch of the complex log).
/// Throws SingularMatrix on an exactly zero pivot.
Scalar log_determinant(const Matrix& a);

/// Minimum-norm least-squares solution of A x = b.
///
/// Householder QR with column pivoting decides the numerical rank with the
/// cutoff cols * eps * max|R_kk|; a second QR of the leading rows of R
/// (complete orthogonal decomposition) removes the null-space component.
Vector lstsq_minnorm(const Matrix& a, const Vector& b);

} // namespace subeig
