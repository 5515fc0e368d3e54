#include "subeig/corrections.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace subeig::corrections {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_hermitian(const Matrix& a, const char* op) {
  if (!a.is_hermitian()) {
    throw NotHermitian(std::string(op) + ": the Rayleigh-quotient derivatives assume A = A*");
  }
}

void require_square(const CorrectionInput& in) {
  if (!in.a.square() || in.a.rows() != in.x.size() || in.r.size() != in.x.size()) {
    throw DimensionMismatch("correction input: A, x and r disagree in size");
  }
}

bool finite(const Vector& v) {
  for (const auto& x : v) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  }
  return true;
}

// M - lambda I with M = A or diag(A).
Matrix leading_term(const Matrix& a, Scalar lambda, bool diagonal_only) {
  if (!diagonal_only) return shifted(a, lambda);
  const std::size_t n = a.rows();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = a(i, i) - lambda;
  return m;
}

// B - c1 x w* - c2 u x* + c3 x x*, the common shape of every rank-2 update
// below (u = B x, w = B* x).
Matrix rank2_update(const Matrix& b, const Vector& x, const Vector& u, const Vector& w,
                    Scalar c1, Scalar c2, Scalar c3) {
  const std::size_t n = b.rows();
  Matrix out = b;
  Scalar* d = out.data_mut();
  for (std::size_t j = 0; j < n; ++j) {
    const Scalar xj = std::conj(x[j]);
    const Scalar wj = std::conj(w[j]);
    for (std::size_t i = 0; i < n; ++i) {
      d[j * n + i] += -c1 * x[i] * wj - c2 * u[i] * xj + c3 * x[i] * xj;
    }
  }
  return out;
}

void check_real_lambda(const CorrectionInput& in, const char* op) {
  if (std::abs(in.lambda.imag()) > 1e-12 * std::max(1.0, std::abs(in.lambda))) {
    throw InvalidArgument(std::string(op) + ": the rank-2 Newton form needs a real lambda");
  }
}

} // namespace

// ------------------------------------------------------------------ input

CorrectionInput CorrectionInput::from_vector(const Matrix& a, Vector x) {
  x = normalized(x);
  Vector ax = matvec(a, x);
  const Scalar lambda = inner(x, ax);
  Vector r = ax - lambda * x;
  return {a, std::move(x), lambda, std::move(r)};
}

void CorrectionInput::validate() const {
  require_square(*this);
  if (std::abs(norm2(x) - 1.0) > 1e-12) throw InvalidArgument("correction input: x is not a unit vector");
  const Vector direct = matvec(a, x) - lambda * x;
  if (norm2(direct - r) > 1e-12 * frobenius_norm(a)) {
    throw InvalidArgument("correction input: r differs from A x - lambda x");
  }
}

// ----------------------------------------------------------------- config

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::davidson: return "davidson";
    case StrategyKind::jd: return "jd";
    case StrategyKind::jdm: return "jdm";
    case StrategyKind::iigd: return "iigd";
    case StrategyKind::iigdm: return "iigdm";
    case StrategyKind::n1: return "n1";
    case StrategyKind::n2: return "n2";
    case StrategyKind::generalized: return "general";
    case StrategyKind::bordered: return "bordered";
  }
  return "unknown";
}

void StrategyConfig::validate() const {
  if (kind == StrategyKind::generalized && alpha == Scalar{0.0}) {
    throw InvalidArgument("generalized correction requires alpha != 0");
  }
}

std::string StrategyConfig::label() const {
  std::string s = to_string(kind);
  if (kind == StrategyKind::generalized) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ":%g:%g", alpha.real(), beta.real());
    s += buf;
  }
  if (diag_precond && (kind == StrategyKind::n1 || kind == StrategyKind::n2)) s += "+diag";
  if (enforce_orth) s += "+orth";
  return s;
}

StrategyConfig parse_strategy(std::string_view token) {
  StrategyConfig cfg;
  auto number = [&](std::string_view text) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size()) {
      throw InvalidArgument("bad number '" + std::string(text) + "' in method '" + std::string(token) + "'");
    }
    return v;
  };

  if (token.starts_with("general:")) {
    const std::string_view rest = token.substr(8);
    const auto sep = rest.find_first_of(",:");
    if (sep == std::string_view::npos) throw InvalidArgument("general needs two parameters: general:a,b");
    cfg.kind = StrategyKind::generalized;
    cfg.alpha = number(rest.substr(0, sep));
    cfg.beta = number(rest.substr(sep + 1));
    cfg.validate();
    return cfg;
  }

  std::string_view name = token;
  if (name.ends_with("+diag")) {
    cfg.diag_precond = true;
    name.remove_suffix(5);
  }
  if (name == "davidson") cfg.kind = StrategyKind::davidson;
  else if (name == "jd") cfg.kind = StrategyKind::jd;
  else if (name == "jdm") cfg.kind = StrategyKind::jdm;
  else if (name == "iigd") cfg.kind = StrategyKind::iigd;
  else if (name == "iigdm") cfg.kind = StrategyKind::iigdm;
  else if (name == "n1") cfg.kind = StrategyKind::n1;
  else if (name == "n2") cfg.kind = StrategyKind::n2;
  else if (name == "bordered") cfg.kind = StrategyKind::bordered;
  else throw InvalidArgument("unknown method '" + std::string(token) + "'");

  if (cfg.diag_precond && cfg.kind != StrategyKind::n1 && cfg.kind != StrategyKind::n2) {
    throw InvalidArgument("+diag applies to n1 and n2 only");
  }
  return cfg;
}

// --------------------------------------------------------------- calculus

Scalar rayleigh_quotient(const Matrix& a, const Vector& x) {
  const double xx = inner(x, x).real();
  if (xx == 0.0) throw InvalidArgument("rayleigh_quotient: zero vector");
  return inner(x, matvec(a, x)) / xx;
}

Vector grad_rq(const Matrix& a, const Vector& x) {
  require_hermitian(a, "grad_rq");
  const double xx = inner(x, x).real();
  if (xx == 0.0) throw InvalidArgument("grad_rq: zero vector");
  const Vector ax = matvec(a, x);
  const Scalar q = inner(x, ax) / xx;
  return (2.0 / xx) * (ax - q * x);
}

Matrix hess_rq(const Matrix& a, const Vector& x) {
  require_hermitian(a, "hess_rq");
  if (std::abs(norm2(x) - 1.0) > 1e-12) {
    throw InvalidArgument("hess_rq: x must be normalized (the simplified Hessian assumes x*x = 1)");
  }
  const Vector u = matvec(a, x);
  const Scalar lambda = inner(x, u);
  // 2(A - lambda I) - 4(u x* + x u* - 2 lambda x x*)
  Matrix h = rank2_update(shifted(a, lambda), x, u, u, 2.0, 2.0, 4.0 * lambda);
  h = 2.0 * h;
  h.detect_hermitian();
  return h;
}

// -------------------------------------------------------------- operators

Matrix jd_operator(const CorrectionInput& in) {
  require_square(in);
  const Matrix b = shifted(in.a, in.lambda);
  const Vector u = matvec(b, in.x);
  const Vector w = adjoint_matvec(b, in.x);
  const Scalar gamma = inner(in.x, u);
  return rank2_update(b, in.x, u, w, 1.0, 1.0, gamma);
}

Matrix jdm_operator(const CorrectionInput& in) {
  require_square(in);
  const Matrix b = shifted(in.a, in.lambda);
  const Vector w = adjoint_matvec(b, in.x);
  return rank2_update(b, in.x, Vector(in.x.size()), w, 1.0, 0.0, 0.0);
}

Matrix n1_operator(const CorrectionInput& in, const StrategyConfig& cfg) {
  require_square(in);
  const Matrix m = leading_term(in.a, in.lambda, cfg.diag_precond);
  if (in.a.is_hermitian()) {
    // A x x* + x x* A - 2 lambda x x* = r x* + x r* for Hermitian A.
    check_real_lambda(in, "n1");
    return rank2_update(m, in.x, in.r, in.r, 2.0, 2.0, 0.0);
  }
  if (!cfg.allow_nonhermitian) require_hermitian(in.a, "n1");
  const Vector u = matvec(in.a, in.x);
  const Vector w = adjoint_matvec(in.a, in.x);
  return rank2_update(m, in.x, u, w, 2.0, 2.0, 4.0 * in.lambda);
}

Matrix n2_operator(const CorrectionInput& in, const StrategyConfig& cfg) {
  require_square(in);
  if (!in.a.is_hermitian() && !cfg.allow_nonhermitian) require_hermitian(in.a, "n2");
  const Matrix b = leading_term(in.a, in.lambda, cfg.diag_precond);
  const Vector u = matvec(b, in.x);
  const Vector w = adjoint_matvec(b, in.x);
  const Scalar gamma = inner(in.x, u);
  return rank2_update(b, in.x, u, w, 2.0, 2.0, 4.0 * gamma);
}

Matrix generalized_operator(const CorrectionInput& in, Scalar alpha, Scalar beta) {
  require_square(in);
  const Matrix b = shifted(in.a, in.lambda);
  const Vector u = matvec(b, in.x);
  const Vector w = adjoint_matvec(b, in.x);
  const Scalar gamma = inner(in.x, u);
  return rank2_update(b, in.x, u, w, alpha, beta, alpha * beta * gamma);
}

Matrix bordered_matrix(const CorrectionInput& in) {
  require_square(in);
  const std::size_t n = in.a.rows();
  Matrix m(n + 1, n + 1);
  Scalar* d = m.data_mut();
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = in.a.column(j);
    std::copy(col.begin(), col.end(), d + j * (n + 1));
    d[j * (n + 1) + j] -= in.lambda;
    d[j * (n + 1) + n] = -std::conj(in.x[j]);
    d[n * (n + 1) + j] = -in.x[j];
  }
  return m;
}

// ------------------------------------------------------------- strategies

// LU stops only at an exactly zero pivot: near-singular shifts are the whole
// point of inverse iteration, and the computed direction stays accurate.
Vector shifted_solve(const Matrix& a, Scalar lambda, const Vector& b) {
  const Matrix m = shifted(a, lambda);
  try {
    Vector x = lu_solve(m, b, LuOptions{0.0});
    if (finite(x)) return x;
  } catch (const SingularMatrix&) {
  }
  return lstsq_minnorm(m, b);
}

Vector project_out(const Vector& t, const Vector& x) {
  Vector out = t;
  axpy(-inner(x, t), x.span(), out.span());
  return out;
}

// The equation op t = -r restricted to the orthogonal complement of x, in
// both the unknown and the residual: P op P t = -P r with P = I - x x*.
// Since P (I - a x x*) = P for every a, the n1 / n2 / generalized operators
// all collapse to the Jacobi-Davidson one here.
Vector solve_within_complement(const Matrix& op, const CorrectionInput& in) {
  const Vector u = matvec(op, in.x);
  const Vector w = adjoint_matvec(op, in.x);
  const Matrix restricted = rank2_update(op, in.x, u, w, 1.0, 1.0, inner(in.x, u));
  return project_out(lstsq_minnorm(restricted, -project_out(in.r, in.x)), in.x);
}

Vector solve_davidson(const CorrectionInput& in) {
  require_square(in);
  const std::size_t n = in.x.size();
  const double tol = 1e-14 * max_abs(in.a);
  Vector t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar d = in.a(i, i) - in.lambda;
    if (std::abs(d) < tol || d == Scalar{0.0}) {
      std::ostringstream os;
      os << "davidson: diag(A) - lambda vanishes at index " << i;
      throw SingularDiagonal(i, os.str());
    }
    t[i] = -in.r[i] / d;
  }
  return t;
}

Vector solve_jd(const CorrectionInput& in, bool enforce_orth) {
  Vector t = lstsq_minnorm(jd_operator(in), -in.r);
  return enforce_orth ? project_out(t, in.x) : t;
}

Vector solve_jdm(const CorrectionInput& in) {
  return project_out(lstsq_minnorm(jdm_operator(in), -in.r), in.x);
}

Vector solve_iigd(const CorrectionInput& in) {
  require_square(in);
  const Vector u = shifted_solve(in.a, in.lambda, in.r);
  const Vector v = shifted_solve(in.a, in.lambda, in.x);
  const Scalar xv = inner(in.x, v);
  if (std::abs(xv) <= 64.0 * kEps * norm2(v)) {
    throw Breakdown("iigd: x*(A - lambda I)^{-1} x vanishes, tau is undefined");
  }
  const Scalar tau = inner(in.x, u) / xv;
  Vector t = -u;
  axpy(tau, v.span(), t.span());
  return t;
}

Vector solve_iigdm(const CorrectionInput& in) {
  require_square(in);
  const Vector s = shifted_solve(in.a, in.lambda, in.x);
  const Scalar xs = inner(in.x, s);
  if (std::abs(xs) <= 64.0 * kEps * norm2(s)) {
    throw Breakdown("iigdm: x*(A - lambda I)^{-1} x vanishes, eta is undefined");
  }
  const Scalar eta = 1.0 / xs;
  Vector t = eta * s - in.x;
  return project_out(t, in.x);
}

Vector solve_n1(const CorrectionInput& in, const StrategyConfig& cfg) {
  const Matrix op = n1_operator(in, cfg);
  if (cfg.enforce_orth) return solve_within_complement(op, in);
  return lstsq_minnorm(op, -in.r);
}

// Without the constraint the exact solution is t = x (the operator maps x to
// -r), so the computed t differs from x only by rounding.
Vector solve_n2(const CorrectionInput& in, const StrategyConfig& cfg) {
  const Matrix op = n2_operator(in, cfg);
  if (cfg.enforce_orth) return solve_within_complement(op, in);
  Vector t;
  try {
    t = lu_solve(op, -in.r);
  } catch (const SingularMatrix&) {
    t = lstsq_minnorm(op, -in.r);
  }
  return t;
}

Vector solve_generalized(const CorrectionInput& in, Scalar alpha, Scalar beta, bool enforce_orth) {
  if (alpha == Scalar{0.0}) throw InvalidArgument("solve_generalized: alpha must be nonzero");
  const Matrix op = generalized_operator(in, alpha, beta);
  if (enforce_orth) return solve_within_complement(op, in);
  return lstsq_minnorm(op, -in.r);
}

BorderedSolution solve_bordered(const CorrectionInput& in) {
  const std::size_t n = in.x.size();
  Vector rhs(n + 1);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -in.r[i];
  // Like the shifted solves, only an exactly zero pivot counts as singular:
  // the bordered matrix stays well conditioned while A - lambda I degenerates.
  const Vector sol = lu_solve(bordered_matrix(in), rhs, LuOptions{0.0});
  if (!finite(sol)) throw SingularMatrix(n, "bordered: solution overflowed");
  Vector t(n);
  std::copy_n(sol.begin(), n, t.begin());
  return {std::move(t), sol[n]};
}

Vector solve(const CorrectionInput& in, const StrategyConfig& cfg) {
  cfg.validate();
  Vector t;
  switch (cfg.kind) {
    case StrategyKind::davidson: t = solve_davidson(in); break;
    case StrategyKind::jd: t = solve_jd(in); break;
    case StrategyKind::jdm: t = solve_jdm(in); break;
    case StrategyKind::iigd: t = solve_iigd(in); break;
    case StrategyKind::iigdm: t = solve_iigdm(in); break;
    case StrategyKind::n1: t = solve_n1(in, cfg); break;
    case StrategyKind::n2: t = solve_n2(in, cfg); break;
    case StrategyKind::generalized: t = solve_generalized(in, cfg.alpha, cfg.beta, cfg.enforce_orth); break;
    case StrategyKind::bordered: t = solve_bordered(in).t; break;
  }
  return cfg.enforce_orth ? project_out(t, in.x) : t;
}

} // namespace subeig::corrections
