#include "subeig/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>

#include "householder.hpp"

namespace subeig {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string dims(const char* op, std::size_t a, std::size_t b) {
  std::ostringstream os;
  os << op << ": dimension mismatch (" << a << " vs " << b << ")";
  return os.str();
}

void require_same(const char* op, std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch(dims(op, a, b));
}

} // namespace

// ---------------------------------------------------------------- Vector ---

Vector& Vector::operator+=(const Vector& other) {
  require_same("vector +", size(), other.size());
  for (std::size_t i = 0; i < size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same("vector -", size(), other.size());
  for (std::size_t i = 0; i < size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Vector& Vector::operator*=(Scalar s) {
  for (auto& v : data_) v *= s;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator-(Vector a) { return a *= Scalar{-1.0}; }
Vector operator*(Scalar s, Vector a) { return a *= s; }
Vector operator*(Vector a, Scalar s) { return a *= s; }

Scalar inner(std::span<const Scalar> x, std::span<const Scalar> y) {
  require_same("inner", x.size(), y.size());
  Scalar s{0.0};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double norm2(std::span<const Scalar> x) {
  // Scaled sum of squares, as in LAPACK's dznrm2, to stay clear of overflow.
  double scale = 0.0;
  double ssq = 1.0;
  auto accumulate = [&](double v) {
    if (v == 0.0) return;
    const double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  };
  for (const auto& v : x) {
    accumulate(v.real());
    accumulate(v.imag());
  }
  return scale * std::sqrt(ssq);
}

double norm_inf(const Vector& x) {
  double m = 0.0;
  for (const auto& v : x) m = std::max(m, std::abs(v));
  return m;
}

Vector normalized(const Vector& x) {
  const double nrm = norm2(x);
  if (nrm == 0.0) throw InvalidArgument("normalized: zero vector");
  return x * Scalar{1.0 / nrm};
}

void axpy(Scalar a, std::span<const Scalar> x, std::span<Scalar> y) {
  require_same("axpy", x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// ---------------------------------------------------------------- Matrix ---

Matrix::Matrix(std::size_t rows, std::size_t cols, Scalar fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<Scalar>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.begin()->size();
  Matrix a(m, n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n) throw DimensionMismatch("from_rows: ragged rows");
    std::size_t j = 0;
    for (const auto& v : row) a.data_[j++ * m + i] = v;
    ++i;
  }
  return a;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a.data_[i * n + i] = 1.0;
  a.hermitian_ = true;
  return a;
}

Matrix Matrix::diagonal(const Vector& d) {
  const std::size_t n = d.size();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a.data_[i * n + i] = d[i];
  return a;
}

Matrix Matrix::from_columns(std::span<const Vector> columns) {
  Matrix a;
  for (const auto& c : columns) a.append_column(c.span());
  return a;
}

Vector Matrix::column_vector(std::size_t j) const {
  auto c = column(j);
  return Vector(std::vector<Scalar>(c.begin(), c.end()));
}

void Matrix::append_column(std::span<const Scalar> column) {
  if (cols_ == 0 && rows_ == 0) {
    rows_ = column.size();
  }
  require_same("append_column", rows_, column.size());
  data_.insert(data_.end(), column.begin(), column.end());
  ++cols_;
  hermitian_ = false;
}

void Matrix::grow_square() {
  if (!square()) throw DimensionMismatch("grow_square: matrix is not square");
  const std::size_t n = rows_;
  std::vector<Scalar> grown((n + 1) * (n + 1), Scalar{0.0});
  for (std::size_t j = 0; j < n; ++j) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(j * n), n,
                grown.begin() + static_cast<std::ptrdiff_t>(j * (n + 1)));
  }
  data_ = std::move(grown);
  rows_ = cols_ = n + 1;
  hermitian_ = false;
}

void Matrix::mark_hermitian() {
  if (!detect_hermitian()) {
    throw NotHermitian("mark_hermitian: ||A - A*||_max exceeds 1e-13 ||A||_max");
  }
}

bool Matrix::detect_hermitian() {
  if (!square()) return false;
  const double scale = max_abs(*this);
  double dev = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      dev = std::max(dev, std::abs(at(i, j) - std::conj(at(j, i))));
    }
  }
  if (dev > 1e-13 * scale) return false;
  hermitian_ = true;
  return true;
}

double frobenius_norm(const Matrix& a) {
  return norm2(std::span<const Scalar>(a.data(), a.rows() * a.cols()));
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  const std::size_t count = a.rows() * a.cols();
  for (std::size_t k = 0; k < count; ++k) m = std::max(m, std::abs(a.data()[k]));
  return m;
}

Scalar trace(const Matrix& a) {
  if (!a.square()) throw DimensionMismatch("trace: matrix is not square");
  Scalar s{0.0};
  for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

Matrix adjoint(const Matrix& a) {
  Matrix b(a.cols(), a.rows());
  Scalar* out = b.data_mut();
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out[i * a.cols() + j] = std::conj(a(i, j));
  }
  if (a.is_hermitian()) b.mark_hermitian();
  return b;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same("matrix + rows", a.rows(), b.rows());
  require_same("matrix + cols", a.cols(), b.cols());
  Matrix c = a;
  Scalar* out = c.data_mut();
  for (std::size_t k = 0; k < a.rows() * a.cols(); ++k) out[k] += b.data()[k];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same("matrix - rows", a.rows(), b.rows());
  require_same("matrix - cols", a.cols(), b.cols());
  Matrix c = a;
  Scalar* out = c.data_mut();
  for (std::size_t k = 0; k < a.rows() * a.cols(); ++k) out[k] -= b.data()[k];
  return c;
}

Matrix operator*(Scalar s, const Matrix& a) {
  Matrix c = a;
  Scalar* out = c.data_mut();
  for (std::size_t k = 0; k < a.rows() * a.cols(); ++k) out[k] *= s;
  return c;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  require_same("multiply", a.cols(), b.rows());
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.column_mut(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Scalar bkj = b(k, j);
      if (bkj == Scalar{0.0}) continue;
      axpy(bkj, a.column(k), cj);
    }
  }
  return c;
}

Matrix outer(const Vector& x, const Vector& y) {
  Matrix c(x.size(), y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const Scalar yj = std::conj(y[j]);
    auto cj = c.column_mut(j);
    for (std::size_t i = 0; i < x.size(); ++i) cj[i] = x[i] * yj;
  }
  return c;
}

Matrix shifted(const Matrix& a, Scalar shift) {
  if (!a.square()) throw DimensionMismatch("shifted: matrix is not square");
  Matrix c = a;
  Scalar* out = c.data_mut();
  for (std::size_t i = 0; i < a.rows(); ++i) out[i * a.rows() + i] -= shift;
  if (a.is_hermitian() && shift.imag() == 0.0) c.mark_hermitian();
  return c;
}

Vector matvec(const Matrix& a, const Vector& x) {
  require_same("matvec", a.cols(), x.size());
  // Column sweep: every y[i] still accumulates j = 0, 1, ... in order.
  Vector y(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) axpy(x[j], a.column(j), y.span());
  return y;
}

Vector adjoint_matvec(const Matrix& a, const Vector& x) {
  require_same("adjoint_matvec", a.rows(), x.size());
  Vector y(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) y[j] = inner(a.column(j), x.span());
  return y;
}

// -------------------------------------------------------------------- LU ---

namespace {

struct LuFactors {
  Matrix lu;
  std::vector<std::size_t> perm;  // row k of U came from row perm[k] of A
  int swaps = 0;
};

LuFactors lu_factor(const Matrix& a, double pivot_tol) {
  if (!a.square()) throw DimensionMismatch("lu: matrix is not square");
  const std::size_t n = a.rows();
  LuFactors f{a, std::vector<std::size_t>(n), 0};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  Scalar* m = f.lu.data_mut();
  auto at = [&](std::size_t i, std::size_t j) -> Scalar& { return m[j * n + i]; };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(at(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(at(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > pivot_tol)) {
      std::ostringstream os;
      os << "lu_solve: pivot " << k << " has magnitude " << best << " <= " << pivot_tol;
      throw SingularMatrix(k, os.str());
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      std::swap(f.perm[k], f.perm[p]);
      ++f.swaps;
    }
    const Scalar inv = 1.0 / at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) at(i, k) *= inv;
    for (std::size_t j = k + 1; j < n; ++j) {
      const Scalar ukj = at(k, j);
      if (ukj == Scalar{0.0}) continue;
      for (std::size_t i = k + 1; i < n; ++i) at(i, j) -= at(i, k) * ukj;
    }
  }
  return f;
}

} // namespace

Vector lu_solve(const Matrix& a, const Vector& b, LuOptions options) {
  require_same("lu_solve", a.rows(), b.size());
  const std::size_t n = a.rows();
  const double tol = options.pivot_tol < 0.0
                         ? static_cast<double>(n) * kEps * max_abs(a)
                         : options.pivot_tol;
  const LuFactors f = lu_factor(a, tol);

  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t j = 0; j < n; ++j) {
    const Scalar xj = x[j];
    for (std::size_t i = j + 1; i < n; ++i) x[i] -= f.lu.at(i, j) * xj;
  }
  for (std::size_t j = n; j-- > 0;) {
    x[j] /= f.lu.at(j, j);
    const Scalar xj = x[j];
    for (std::size_t i = 0; i < j; ++i) x[i] -= f.lu.at(i, j) * xj;
  }
  return x;
}

Scalar log_determinant(const Matrix& a) {
  const LuFactors f = lu_factor(a, 0.0);
  Scalar s{0.0};
  for (std::size_t k = 0; k < a.rows(); ++k) s += std::log(f.lu.at(k, k));
  if (f.swaps % 2 != 0) s += Scalar{0.0, std::numbers::pi};
  return s;
}

// ----------------------------------------------------------------- lstsq ---

Vector lstsq_minnorm(const Matrix& a, const Vector& b) {
  require_same("lstsq_minnorm", a.rows(), b.size());
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t kmax = std::min(m, n);

  Matrix r = a;
  Scalar* rd = r.data_mut();
  auto col = [&](std::size_t j, std::size_t from) {
    return std::span<Scalar>(rd + j * m + from, m - from);
  };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Vector qb = b;

  for (std::size_t k = 0; k < kmax; ++k) {
    std::size_t p = k;
    double best = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      const double v = norm2(col(j, k));
      if (v > best) {
        best = v;
        p = j;
      }
    }
    if (p != k) {
      std::swap_ranges(col(k, 0).begin(), col(k, 0).end(), col(p, 0).begin());
      std::swap(perm[k], perm[p]);
    }
    auto ck = col(k, k);
    const detail::Reflector h = detail::make_reflector(ck[0], ck.subspan(1));
    const Scalar tc = std::conj(h.tau);
    for (std::size_t j = k + 1; j < n; ++j) detail::apply_reflector(tc, ck.subspan(1), col(j, k));
    detail::apply_reflector(tc, ck.subspan(1), qb.span().subspan(k));
  }

  double rmax = 0.0;
  for (std::size_t k = 0; k < kmax; ++k) rmax = std::max(rmax, std::abs(r.at(k, k)));
  const double cutoff = static_cast<double>(n) * kEps * rmax;
  std::size_t rank = 0;
  while (rank < kmax && std::abs(r.at(rank, rank)) > cutoff) ++rank;

  Vector z(n);
  if (rank == n) {
    for (std::size_t i = n; i-- > 0;) {
      Scalar s = qb[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= r.at(i, j) * z[j];
      z[i] = s / r.at(i, i);
    }
  } else if (rank > 0) {
    // [R11 R12]* = Q2 S, so [R11 R12] = S* Q2* and the min-norm solution of
    // S* Q2* z = c is z = Q2 [S^{-*} c; 0].
    Matrix c(n, rank);
    Scalar* cd = c.data_mut();
    for (std::size_t i = 0; i < rank; ++i) {
      for (std::size_t j = i; j < n; ++j) cd[i * n + j] = std::conj(r.at(i, j));
    }
    std::vector<Scalar> taus(rank);
    for (std::size_t i = 0; i < rank; ++i) {
      std::span<Scalar> ci(cd + i * n + i, n - i);
      const detail::Reflector h = detail::make_reflector(ci[0], ci.subspan(1));
      taus[i] = h.tau;
      for (std::size_t j = i + 1; j < rank; ++j) {
        detail::apply_reflector(std::conj(h.tau), ci.subspan(1),
                                std::span<Scalar>(cd + j * n + i, n - i));
      }
    }
    for (std::size_t i = 0; i < rank; ++i) {
      Scalar s = qb[i];
      for (std::size_t l = 0; l < i; ++l) s -= std::conj(c.at(l, i)) * z[l];
      z[i] = s / std::conj(c.at(i, i));
    }
    for (std::size_t i = rank; i-- > 0;) {
      std::span<const Scalar> tail(c.data() + i * n + i + 1, n - i - 1);
      detail::apply_reflector(taus[i], tail, z.span().subspan(i));
    }
  }

  Vector x(n);
  for (std::size_t j = 0; j < n; ++j) x[perm[j]] = z[j];
  return x;
}

} // namespace subeig
