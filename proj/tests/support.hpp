#pragma once

// Test-side generators and oracles. Everything here is written with plain
// loops so that checks do not lean on the library routines they verify.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "subeig/dense.hpp"
#include "subeig/random.hpp"

namespace testing_support {

using subeig::Matrix;
using subeig::Scalar;
using subeig::SplitMix64;
using subeig::Vector;

inline Scalar random_scalar(SplitMix64& rng) { return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}; }

inline Vector random_vector(std::size_t n, SplitMix64& rng) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = random_scalar(rng);
  return v;
}

inline double plain_norm(const Vector& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline Vector random_unit(std::size_t n, SplitMix64& rng) {
  Vector v = random_vector(n, rng);
  const double nv = plain_norm(v);
  for (auto& z : v) z /= nv;
  return v;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, SplitMix64& rng) {
  Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = random_scalar(rng);
  return m;
}

/// (B + B*)/2 for a random complex B, flagged Hermitian.
inline Matrix random_hermitian(std::size_t n, SplitMix64& rng) {
  Matrix b = random_matrix(n, n, rng);
  Matrix h(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) h(i, j) = 0.5 * (b(i, j) + std::conj(b(j, i)));
    h(j, j) = h(j, j).real();
  }
  h.mark_hermitian();
  return h;
}

/// Random matrix plus n on the diagonal: strongly diagonally dominant.
inline Matrix well_conditioned(std::size_t n, SplitMix64& rng) {
  Matrix m = random_matrix(n, n, rng);
  for (std::size_t i = 0; i < n; ++i) m(i, i) += static_cast<double>(n);
  return m;
}

inline Scalar dot(const Vector& x, const Vector& y) {
  Scalar s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline Vector apply(const Matrix& a, const Vector& x) {
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline Matrix product(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Scalar s{};
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline Matrix eye(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

/// I - c x x*
inline Matrix reflector_like(const Vector& x, Scalar c) {
  Matrix m = eye(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) m(i, j) -= c * x[i] * std::conj(x[j]);
  return m;
}

inline Matrix minus(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = a(i, j) - b(i, j);
  return c;
}

inline double fro(const Matrix& a) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::norm(a(i, j));
  return std::sqrt(s);
}

inline double max_entry(const Matrix& a) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) m = std::max(m, std::abs(a(i, j)));
  return m;
}

/// Gaussian elimination with partial pivoting on copies (oracle solver).
inline Vector gauss_solve(Matrix m, Vector b) {
  const std::size_t n = b.size();
  std::vector<std::vector<Scalar>> r(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = m(i, j);
  std::vector<Scalar> y(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(r[i][k]) > std::abs(r[p][k])) p = i;
    std::swap(r[k], r[p]);
    std::swap(y[k], y[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Scalar f = r[i][k] / r[k][k];
      for (std::size_t j = k; j < n; ++j) r[i][j] -= f * r[k][j];
      y[i] -= f * y[k];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    Scalar s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= r[i][j] * x[j];
    x[i] = s / r[i][i];
  }
  return x;
}

/// Sine of the angle between the directions of u and v.
inline double sin_between(const Vector& u, const Vector& v) {
  const Scalar c = dot(u, v) / dot(u, u);
  Vector rest = v;
  for (std::size_t i = 0; i < v.size(); ++i) rest[i] -= c * u[i];
  return plain_norm(rest) / plain_norm(v);
}

/// Sine of the angle between z and span{x, t}.
inline double sin_to_span(const Vector& z, const Vector& x, const Vector& t) {
  const std::size_t n = z.size();
  Vector q1 = x;
  const double n1 = plain_norm(q1);
  for (auto& e : q1) e /= n1;
  Vector q2 = t;
  const Scalar c = dot(q1, q2);
  for (std::size_t i = 0; i < n; ++i) q2[i] -= c * q1[i];
  const Scalar c2 = dot(q1, q2);  // second pass
  for (std::size_t i = 0; i < n; ++i) q2[i] -= c2 * q1[i];
  const double n2 = plain_norm(q2);
  Vector rest = z;
  const Scalar a1 = dot(q1, z);
  for (std::size_t i = 0; i < n; ++i) rest[i] -= a1 * q1[i];
  if (n2 > 0.0) {
    for (auto& e : q2) e /= n2;
    const Scalar a2 = dot(q2, rest);
    for (std::size_t i = 0; i < n; ++i) rest[i] -= a2 * q2[i];
  }
  return plain_norm(rest) / plain_norm(z);
}

inline Scalar rq(const Matrix& a, const Vector& x) { return dot(x, apply(a, x)) / dot(x, x); }

}  // namespace testing_support
